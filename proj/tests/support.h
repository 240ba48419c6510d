#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "querygen/catalog.h"
#include "querygen/schema.h"
#include "querygen/tpch_data.h"

namespace querygen::testing {

inline std::string source_path(const std::string& rel) {
  return std::string(QUERYGEN_SOURCE_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string tpch_ddl() { return read_file(source_path("data/tpch/schema.sql")); }

inline SchemaCatalog tpch_catalog(bool infer = true) {
  auto c = ingest_ddl(tpch_ddl(), "tpch");
  return infer ? infer_foreign_keys(c) : c;
}

inline TpchSynthOptions small_tpch() {
  TpchSynthOptions o;
  o.orders = 300;
  o.parts = 60;
  o.suppliers = 12;
  o.customers = 40;
  return o;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("querygen-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// TPC-H catalog profiled from a small synthetic dataset written to `dir`.
inline SchemaCatalog profiled_tpch(const std::string& dir) {
  write_tpch_tbl(dir, small_tpch());
  const auto c = tpch_catalog();
  DelimitedFileSampler sampler(dir, c);
  return profile_columns(c, sampler);
}

// Release/download catalog profiled from tests/data/validator, with the
// fixture's label columns forced.
inline SchemaCatalog validator_catalog(const std::vector<std::string>& label_columns) {
  const auto base = ingest_ddl(read_file(source_path("tests/data/validator/schema.sql")), "validator");
  DelimitedFileSampler sampler(source_path("tests/data/validator/data"), base);
  ProfileOptions o;
  o.label_columns.insert(label_columns.begin(), label_columns.end());
  return profile_columns(base, sampler, o);
}

}  // namespace querygen::testing
