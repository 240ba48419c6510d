#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace querygen {

// Small synthetic data set in the TPC-H .tbl layout (pipe-delimited, one
// trailing '|'). Keys are consistent with the schema's foreign keys; value
// domains follow the TPC-H specification loosely. Not a substitute for dbgen.
struct TpchSynthOptions {
  std::uint64_t seed = 1;
  std::uint64_t suppliers = 100;
  std::uint64_t parts = 200;
  std::uint64_t customers = 150;
  std::uint64_t orders = 1500;
  int max_lines_per_order = 7;
};

// Writes <dir>/<table>.tbl for the eight TPC-H tables; returns row counts.
std::map<std::string, std::uint64_t> write_tpch_tbl(const std::string& directory,
                                                    const TpchSynthOptions& options = {});

}  // namespace querygen
