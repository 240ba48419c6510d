#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "querygen/catalog.h"

namespace querygen {

// Parses CREATE TABLE / CREATE VIEW / ALTER TABLE ... ADD constraint
// statements. Declared keys get provenance kDeclared; identifiers are
// folded to lower case. Throws DdlSyntaxError, DuplicateObjectError, or
// UnknownObjectError for a foreign key naming a missing table or column.
SchemaCatalog ingest_ddl(std::string_view ddl_text, std::string catalog_name = {});

struct FkInferenceOptions {
  // Explicit per-table column prefixes ("nation" -> "n_"). Tables without an
  // entry use the auto-detected prefix when `auto_prefix` is set: the text up
  // to and including the first '_' when every column of the table shares it.
  std::map<std::string, std::string> prefixes;
  bool auto_prefix = true;
};

// Column prefix used when matching names for `table`.
std::string column_prefix(const TableDef& table, const FkInferenceOptions& options);

// Adds kInferred edges for columns whose prefix-stripped name equals another
// table's prefix-stripped single-column primary key. Ambiguous matches (more
// than one candidate table) are skipped and described in `advisories`.
// Idempotent; never duplicates an existing edge; never removes edges.
SchemaCatalog infer_foreign_keys(const SchemaCatalog& catalog,
                                 const FkInferenceOptions& options = {});

// Source of sample values for column profiling.
class ValueSampler {
 public:
  virtual ~ValueSampler() = default;
  // Up to `limit` non-null values of table.column rendered as text.
  // Throws on failure; the profiler records a warning and moves on.
  virtual std::vector<std::string> sample(const std::string& table,
                                          const std::string& column,
                                          std::size_t limit) = 0;
};

// Reads `<dir>/<table>.tbl` or `<dir>/<table>.csv` (delimiter-separated, no
// header for .tbl, header row for .csv) and serves columns by position.
class DelimitedFileSampler : public ValueSampler {
 public:
  DelimitedFileSampler(std::string directory, const SchemaCatalog& catalog,
                       char tbl_delimiter = '|', char csv_delimiter = ',');
  std::vector<std::string> sample(const std::string& table, const std::string& column,
                                  std::size_t limit) override;

 private:
  std::string directory_;
  const SchemaCatalog& catalog_;
  char tbl_delimiter_;
  char csv_delimiter_;
};

struct ProfileOptions {
  std::size_t sample_limit = 10'000;          // K
  std::size_t enumeration_threshold = 20;
  std::size_t distinct_cap = 10'000;
  double label_fraction = 0.9;
  std::size_t max_sample_values = 8;
  // "table.column" entries forced to is_label = true.
  std::set<std::string> label_columns;
};

// True for version-like text: digits(.digits)+
bool looks_like_label(std::string_view value);

// Fills ColumnMetadata from sampled values. Never changes tables, columns or
// keys. Sampler failures leave that column's metadata untouched and append a
// warning to the catalog advisories.
SchemaCatalog profile_columns(const SchemaCatalog& catalog, ValueSampler& sampler,
                              const ProfileOptions& options = {});

struct RenderOptions {
  bool include_foreign_keys = true;
  bool include_inferred_foreign_keys = false;
};

using ColumnFilter = std::map<std::string, std::set<std::string>>;

// Canonical CREATE TABLE text, one string per selected table, in catalog
// order. `column_filter` restricts the listed columns of the tables it names;
// keys and foreign keys touching dropped columns are omitted. Throws
// UnknownObjectError when a filter names an unknown table or column.
std::vector<std::string> render_create_statements(
    const SchemaCatalog& catalog,
    const std::optional<std::set<std::string>>& table_filter = std::nullopt,
    const std::optional<ColumnFilter>& column_filter = std::nullopt,
    const RenderOptions& options = {});

std::string render_type(const ColumnDef& column);

}  // namespace querygen
