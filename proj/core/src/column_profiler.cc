#include <algorithm>
#include <charconv>
#include <fstream>
#include <regex>
#include <set>
#include <unordered_set>

#include "querygen/error.h"
#include "querygen/schema.h"
#include "internal/delimited.h"

namespace querygen {

bool looks_like_label(std::string_view value) {
  static const std::regex kPattern(R"(^[0-9]+(\.[0-9]+)+$)");
  return std::regex_match(value.begin(), value.end(), kPattern);
}

namespace {

bool numeric_less(const std::string& a, const std::string& b) {
  double x = 0, y = 0;
  const auto ra = std::from_chars(a.data(), a.data() + a.size(), x);
  const auto rb = std::from_chars(b.data(), b.data() + b.size(), y);
  const bool na = ra.ec == std::errc() && ra.ptr == a.data() + a.size();
  const bool nb = rb.ec == std::errc() && rb.ptr == b.data() + b.size();
  if (na && nb) return x < y || (x == y && a < b);
  if (na != nb) return na;
  return a < b;
}

}  // namespace

DelimitedFileSampler::DelimitedFileSampler(std::string directory, const SchemaCatalog& catalog,
                                           char tbl_delimiter, char csv_delimiter)
    : directory_(std::move(directory)),
      catalog_(catalog),
      tbl_delimiter_(tbl_delimiter),
      csv_delimiter_(csv_delimiter) {}

std::vector<std::string> DelimitedFileSampler::sample(const std::string& table,
                                                      const std::string& column,
                                                      std::size_t limit) {
  const TableDef* def = catalog_.find_table(table);
  if (!def) throw UnknownObjectError("unknown table '" + table + "'");
  std::size_t index = 0;
  for (; index < def->columns.size(); ++index)
    if (def->columns[index].name == column) break;
  if (index == def->columns.size())
    throw UnknownObjectError("unknown column '" + table + "." + column + "'");

  auto file = internal::open_table_file(directory_, table);
  if (!file.stream) throw LoadError("no data file for table '" + table + "' in " + directory_);
  const bool csv = file.csv;
  auto& in = file.stream;

  const char delim = csv ? csv_delimiter_ : tbl_delimiter_;
  std::string line;
  if (csv) {
    if (!std::getline(in, line)) return {};
    const auto header = internal::split_fields(line, delim, true);
    for (std::size_t i = 0; i < header.size(); ++i)
      if (to_lower(header[i]) == column) index = i;
  }
  std::vector<std::string> values;
  std::size_t rows = 0;
  while (rows < limit && std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    auto fields = internal::split_fields(line, delim, csv);
    if (index < fields.size() && !fields[index].empty()) values.push_back(std::move(fields[index]));
  }
  return values;
}

SchemaCatalog profile_columns(const SchemaCatalog& catalog, ValueSampler& sampler,
                              const ProfileOptions& options) {
  SchemaCatalog out = catalog;
  for (auto& table : out.tables) {
    for (auto& column : table.columns) {
      std::vector<std::string> values;
      try {
        values = sampler.sample(table.name, column.name, options.sample_limit);
      } catch (const std::exception& e) {
        out.advisories.push_back("profiling " + table.name + "." + column.name +
                                 " failed: " + e.what());
        continue;
      }

      ColumnMetadata meta;
      std::unordered_set<std::string> seen;
      std::size_t label_hits = 0;
      for (const auto& v : values) {
        if (seen.size() < options.distinct_cap || seen.count(v)) {
          if (seen.insert(v).second && meta.sample_values.size() < options.max_sample_values)
            meta.sample_values.push_back(v);
        }
        if (looks_like_label(v)) ++label_hits;
      }
      meta.distinct_value_count = seen.size();

      std::vector<std::string> distinct(seen.begin(), seen.end());
      if (is_numeric(column.sql_type)) std::sort(distinct.begin(), distinct.end(), numeric_less);
      else std::sort(distinct.begin(), distinct.end());
      if (!distinct.empty()) {
        meta.value_range = std::make_pair(distinct.front(), distinct.back());
        if (distinct.size() <= options.enumeration_threshold) meta.enumerated_values = distinct;
      }

      const std::string qualified = table.name + "." + column.name;
      if (options.label_columns.count(qualified)) {
        meta.is_label = true;
      } else if (is_textual(column.sql_type) && !values.empty()) {
        meta.is_label = static_cast<double>(label_hits) >=
                        options.label_fraction * static_cast<double>(values.size());
      }
      column.metadata = std::move(meta);
    }
  }
  return out;
}

}  // namespace querygen
