#include <sqlite3.h>

#include <chrono>

#include "internal/delimited.h"
#include "querygen/error.h"
#include "querygen/execution.h"
#include "querygen/schema.h"

namespace querygen {

struct SqliteDriver::Impl {
  std::string path;
  sqlite3* db = nullptr;
  std::chrono::steady_clock::time_point deadline;
  bool deadline_hit = false;

  static int progress(void* self) {
    auto* impl = static_cast<Impl*>(self);
    if (std::chrono::steady_clock::now() >= impl->deadline) {
      impl->deadline_hit = true;
      return 1;
    }
    return 0;
  }
};

SqliteDriver::SqliteDriver(std::string path) : impl_(std::make_unique<Impl>()) {
  impl_->path = std::move(path);
}

SqliteDriver::~SqliteDriver() {
  if (impl_ && impl_->db) sqlite3_close(impl_->db);
}

void SqliteDriver::connect() {
  if (impl_->db) return;
  if (sqlite3_open(impl_->path.c_str(), &impl_->db) != SQLITE_OK) {
    std::string msg = impl_->db ? sqlite3_errmsg(impl_->db) : "out of memory";
    sqlite3_close(impl_->db);
    impl_->db = nullptr;
    throw ConnectionError("cannot open sqlite database '" + impl_->path + "': " + msg);
  }
}

void SqliteDriver::exec(const std::string& sql) {
  connect();
  char* err = nullptr;
  if (sqlite3_exec(impl_->db, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw LoadError(msg);
  }
}

StatementResult SqliteDriver::execute(const std::string& sql, double timeout_ms) {
  connect();
  StatementResult result;
  sqlite3_stmt* stmt = nullptr;
  const char* tail = nullptr;
  if (sqlite3_prepare_v2(impl_->db, sql.c_str(), static_cast<int>(sql.size()), &stmt, &tail) !=
      SQLITE_OK) {
    result.error = sqlite3_errmsg(impl_->db);
    sqlite3_finalize(stmt);
    return result;
  }
  if (!stmt) {
    result.error = "empty statement";
    return result;
  }
  impl_->deadline = std::chrono::steady_clock::now() +
                    std::chrono::microseconds(static_cast<long long>(timeout_ms * 1000.0));
  impl_->deadline_hit = false;
  sqlite3_progress_handler(impl_->db, 1000, &Impl::progress, impl_.get());
  int rc;
  while ((rc = sqlite3_step(stmt)) == SQLITE_ROW) ++result.rows;
  sqlite3_progress_handler(impl_->db, 0, nullptr, nullptr);
  if (rc != SQLITE_DONE) {
    if (impl_->deadline_hit || rc == SQLITE_INTERRUPT) result.timed_out = true;
    else result.error = sqlite3_errmsg(impl_->db);
  }
  sqlite3_finalize(stmt);
  return result;
}

void SqliteDriver::create_tables(const SchemaCatalog& catalog) {
  RenderOptions opts;
  opts.include_foreign_keys = false;
  for (const auto& stmt : render_create_statements(catalog, std::nullopt, std::nullopt, opts)) {
    const auto space = stmt.find(" (");
    exec("DROP TABLE IF EXISTS " + stmt.substr(13, space - 13));
    exec(stmt);
  }
}

void SqliteDriver::insert_rows(const TableDef& table,
                               const std::vector<std::vector<std::string>>& rows) {
  connect();
  std::string sql = "INSERT INTO " + table.name + " VALUES (";
  for (std::size_t i = 0; i < table.columns.size(); ++i) sql += i ? ", ?" : "?";
  sql += ")";
  sqlite3_stmt* stmt = nullptr;
  if (sqlite3_prepare_v2(impl_->db, sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK)
    throw LoadError("cannot prepare insert into " + table.name + ": " + sqlite3_errmsg(impl_->db));
  exec("BEGIN");
  for (const auto& row : rows) {
    sqlite3_reset(stmt);
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      const int idx = static_cast<int>(i) + 1;
      if (i >= row.size() || row[i].empty()) sqlite3_bind_null(stmt, idx);
      else sqlite3_bind_text(stmt, idx, row[i].data(), static_cast<int>(row[i].size()), SQLITE_TRANSIENT);
    }
    if (sqlite3_step(stmt) != SQLITE_DONE) {
      std::string msg = sqlite3_errmsg(impl_->db);
      sqlite3_finalize(stmt);
      exec("ROLLBACK");
      throw LoadError("insert into " + table.name + " failed: " + msg);
    }
  }
  sqlite3_finalize(stmt);
  exec("COMMIT");
}

std::map<std::string, std::uint64_t> restrict_dataset(SqliteDriver& db, const SchemaCatalog& catalog,
                                                      const std::string& data_dir,
                                                      std::uint64_t max_rows_per_table) {
  if (max_rows_per_table == 0) throw LoadError("max_rows_per_table must be positive");
  db.create_tables(catalog);
  std::map<std::string, std::uint64_t> loaded;
  for (const auto& table : catalog.tables) {
    auto file = internal::open_table_file(data_dir, table.name);
    if (!file.stream) throw LoadError("no .tbl or .csv file for table '" + table.name + "' in " + data_dir);
    const char delim = file.csv ? ',' : '|';
    std::string line;
    if (file.csv) std::getline(file.stream, line);  // header
    std::vector<std::vector<std::string>> rows;
    std::uint64_t line_no = file.csv ? 1 : 0;
    while (rows.size() < max_rows_per_table && std::getline(file.stream, line)) {
      ++line_no;
      if (line.empty() || line == "\r") continue;
      auto fields = internal::split_fields(line, delim, file.csv);
      if (!file.csv && fields.size() == table.columns.size() + 1 && fields.back().empty())
        fields.pop_back();  // dbgen's trailing '|'
      if (fields.size() != table.columns.size())
        throw LoadError(file.path + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(table.columns.size()) + " fields, found " +
                        std::to_string(fields.size()));
      rows.push_back(std::move(fields));
    }
    db.insert_rows(table, rows);
    loaded[table.name] = rows.size();
  }
  return loaded;
}

}  // namespace querygen
