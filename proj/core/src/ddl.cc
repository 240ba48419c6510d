#include <algorithm>
#include <set>
#include <sstream>

#include "querygen/error.h"
#include "querygen/schema.h"
#include "querygen/sql/lexer.h"

namespace querygen {

namespace {

using sql::Token;
using sql::TokenKind;

struct PendingFk {
  ForeignKey fk;
  std::size_t statement = 0;
  std::size_t position = 0;
};

class DdlParser {
 public:
  DdlParser(std::vector<Token> tokens, std::string name) : toks_(std::move(tokens)) {
    catalog_.name = std::move(name);
  }

  SchemaCatalog run() {
    while (peek().kind != TokenKind::kEnd) {
      if (accept_symbol(";")) {
        ++statement_;
        continue;
      }
      statement();
      if (peek().kind != TokenKind::kEnd) expect_symbol(";");
      ++statement_;
    }
    resolve_foreign_keys();
    for (auto& t : catalog_.tables)
      for (const auto& pk : t.primary_key) t.find_column(pk)->nullable = false;
    return std::move(catalog_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept_word(std::string_view w) {
    if (!peek().is_word(w)) return false;
    advance();
    return true;
  }
  bool accept_symbol(std::string_view s) {
    if (!peek().is_symbol(s)) return false;
    advance();
    return true;
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw DdlSyntaxError(statement_, peek().position, message);
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected " + std::string(w));
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) fail("expected '" + std::string(s) + "'");
  }
  std::string identifier(std::string_view what) {
    const Token& t = peek();
    if (t.kind != TokenKind::kIdentifier && t.kind != TokenKind::kQuotedIdentifier)
      fail("expected " + std::string(what));
    return advance().lower;
  }
  // schema.table -> table
  std::string qualified_name(std::string_view what) {
    std::string name = identifier(what);
    while (accept_symbol(".")) name = identifier(what);
    return name;
  }
  std::vector<std::string> column_list() {
    expect_symbol("(");
    std::vector<std::string> cols;
    do {
      cols.push_back(identifier("column name"));
    } while (accept_symbol(","));
    expect_symbol(")");
    return cols;
  }
  void skip_balanced() {
    expect_symbol("(");
    int depth = 1;
    while (depth > 0) {
      if (peek().kind == TokenKind::kEnd) fail("unbalanced parentheses");
      if (peek().is_symbol("(")) ++depth;
      if (peek().is_symbol(")")) --depth;
      advance();
    }
  }
  void skip_to_statement_end() {
    while (peek().kind != TokenKind::kEnd && !peek().is_symbol(";")) advance();
  }

  void statement() {
    if (accept_word("create")) {
      if (accept_word("or")) expect_word("replace");
      if (!accept_word("temporary")) accept_word("temp");
      if (accept_word("table")) return create_table();
      if (accept_word("view")) {
        if (accept_word("if")) {
          expect_word("not");
          expect_word("exists");
        }
        catalog_.views.push_back(qualified_name("view name"));
        skip_to_statement_end();
        return;
      }
      if (peek().is_word("index") || peek().is_word("unique") || peek().is_word("schema")) {
        skip_to_statement_end();
        return;
      }
      fail("unsupported CREATE statement");
    }
    if (accept_word("alter")) {
      expect_word("table");
      accept_word("only");
      const std::size_t name_pos = peek().position;
      TableDef* table = find_table(qualified_name("table name"), name_pos);
      expect_word("add");
      table_constraint(*table);
      skip_to_statement_end();
      return;
    }
    if (peek().is_word("drop") || peek().is_word("comment") || peek().is_word("set")) {
      skip_to_statement_end();
      return;
    }
    fail("expected CREATE TABLE, CREATE VIEW or ALTER TABLE");
  }

  TableDef* find_table(const std::string& name, std::size_t position) {
    TableDef* t = catalog_.find_table(name);
    if (!t) throw DdlSyntaxError(statement_, position, "unknown table '" + name + "'");
    return t;
  }

  void create_table() {
    if (accept_word("if")) {
      expect_word("not");
      expect_word("exists");
    }
    const std::size_t name_pos = peek().position;
    TableDef table;
    table.name = qualified_name("table name");
    if (catalog_.find_table(table.name))
      throw DuplicateObjectError("table '" + table.name + "' is defined twice (statement " +
                                 std::to_string(statement_) + ", offset " +
                                 std::to_string(name_pos) + ")");
    expect_symbol("(");
    do {
      if (peek().is_word("constraint") || peek().is_word("primary") ||
          peek().is_word("foreign") || peek().is_word("unique") || peek().is_word("check") ||
          peek().is_word("key") || peek().is_word("index")) {
        table_constraint(table);
      } else {
        column_def(table);
      }
    } while (accept_symbol(","));
    expect_symbol(")");
    skip_to_statement_end();  // storage options
    catalog_.tables.push_back(std::move(table));
  }

  void set_primary_key(TableDef& table, std::vector<std::string> cols) {
    if (!table.primary_key.empty()) fail("table '" + table.name + "' has two primary keys");
    for (const auto& c : cols)
      if (!table.find_column(c)) fail("primary key column '" + c + "' is not defined");
    table.primary_key = std::move(cols);
  }

  void add_fk(const TableDef& table, std::vector<std::string> from, std::size_t position) {
    expect_word("references");
    ForeignKey fk;
    fk.from_table = table.name;
    fk.from_columns = std::move(from);
    fk.to_table = qualified_name("referenced table");
    if (peek().is_symbol("(")) fk.to_columns = column_list();
    fk.provenance = FkProvenance::kDeclared;
    // ON DELETE / ON UPDATE actions, MATCH, DEFERRABLE
    while (peek().is_word("on") || peek().is_word("match") || peek().is_word("deferrable") ||
           peek().is_word("not") || peek().is_word("initially")) {
      if (accept_word("on")) {
        advance();  // DELETE | UPDATE
        if (accept_word("set")) advance();
        else if (accept_word("no")) advance();
        else advance();
      } else {
        advance();
        if (peek().kind == TokenKind::kIdentifier && !peek().is_word("on")) advance();
      }
    }
    pending_.push_back({std::move(fk), statement_, position});
  }

  void table_constraint(TableDef& table) {
    const std::size_t p = peek().position;
    if (accept_word("constraint")) identifier("constraint name");
    if (accept_word("primary")) {
      expect_word("key");
      set_primary_key(table, column_list());
      return;
    }
    if (accept_word("foreign")) {
      expect_word("key");
      auto cols = column_list();
      for (const auto& c : cols)
        if (!table.find_column(c)) fail("foreign key column '" + c + "' is not defined");
      add_fk(table, std::move(cols), p);
      return;
    }
    if (accept_word("unique")) {
      accept_word("key");
      if (peek().kind == TokenKind::kIdentifier) advance();
      column_list();
      return;
    }
    if (peek().is_word("check")) {
      advance();
      skip_balanced();
      return;
    }
    if (accept_word("key") || accept_word("index")) {
      if (peek().kind == TokenKind::kIdentifier) advance();
      column_list();
      return;
    }
    fail("expected table constraint");
  }

  SqlType map_type(const std::string& name, std::size_t position) {
    static const std::vector<std::pair<std::vector<std::string>, SqlType>> kTypes = {
        {{"int", "integer", "bigint", "smallint", "tinyint", "mediumint", "int2", "int4",
          "int8", "serial", "bigserial"},
         SqlType::kInteger},
        {{"decimal", "numeric", "number", "money"}, SqlType::kDecimal},
        {{"float", "real", "double", "double precision", "float4", "float8"}, SqlType::kFloat},
        {{"char", "character", "nchar", "bpchar"}, SqlType::kChar},
        {{"varchar", "character varying", "char varying", "nvarchar", "text", "string",
          "varchar2", "clob"},
         SqlType::kVarchar},
        {{"date", "timestamp", "datetime", "time", "timestamptz"}, SqlType::kDate},
        {{"boolean", "bool", "bit"}, SqlType::kBoolean},
    };
    for (const auto& [names, type] : kTypes)
      if (std::find(names.begin(), names.end(), name) != names.end()) return type;
    throw DdlSyntaxError(statement_, position, "unsupported column type '" + name + "'");
  }

  void column_def(TableDef& table) {
    const std::size_t p = peek().position;
    ColumnDef col;
    col.name = identifier("column name");
    if (table.find_column(col.name))
      throw DuplicateObjectError("column '" + table.name + "." + col.name + "' is defined twice");
    const std::size_t type_pos = peek().position;
    if (peek().kind != TokenKind::kIdentifier) fail("expected column type");
    std::string type = advance().lower;
    if ((type == "double" && accept_word("precision")) ) type = "double precision";
    else if ((type == "character" || type == "char") && accept_word("varying")) type = "character varying";
    col.sql_type = map_type(type, type_pos);
    if (accept_symbol("(")) {
      do {
        if (peek().kind != TokenKind::kNumber) fail("expected type length");
        col.type_args.push_back(std::stoi(advance().text));
      } while (accept_symbol(","));
      expect_symbol(")");
    }
    if (accept_word("with") || accept_word("without")) {  // time zone
      expect_word("time");
      expect_word("zone");
    }
    table.columns.push_back(col);
    ColumnDef& added = table.columns.back();

    for (;;) {
      if (accept_word("not")) {
        expect_word("null");
        added.nullable = false;
      } else if (accept_word("null")) {
        added.nullable = true;
      } else if (accept_word("primary")) {
        expect_word("key");
        set_primary_key(table, {added.name});
      } else if (accept_word("unique")) {
        accept_word("key");
      } else if (accept_word("default")) {
        if (peek().is_symbol("(")) skip_balanced();
        else {
          if (peek().is_symbol("-")) advance();
          advance();
        }
      } else if (peek().is_word("references")) {
        add_fk(table, {table.columns.back().name}, p);
      } else if (peek().is_word("check")) {
        advance();
        skip_balanced();
      } else if (accept_word("constraint")) {
        identifier("constraint name");
      } else if (accept_word("collate")) {
        identifier("collation");
      } else if (accept_word("auto_increment") || accept_word("autoincrement")) {
      } else {
        break;
      }
    }
  }

  void resolve_foreign_keys() {
    for (auto& pending : pending_) {
      ForeignKey& fk = pending.fk;
      const TableDef* target = catalog_.find_table(fk.to_table);
      if (!target)
        throw UnknownObjectError("foreign key on '" + fk.from_table +
                                 "' references unknown table '" + fk.to_table + "'");
      if (fk.to_columns.empty()) fk.to_columns = target->primary_key;
      if (fk.to_columns.size() != fk.from_columns.size())
        throw DdlSyntaxError(pending.statement, pending.position,
                             "foreign key column count does not match referenced key");
      for (const auto& c : fk.to_columns)
        if (!target->find_column(c))
          throw UnknownObjectError("foreign key references unknown column '" + fk.to_table +
                                   "." + c + "'");
      const bool dup = std::any_of(catalog_.fk_edges.begin(), catalog_.fk_edges.end(),
                                   [&](const ForeignKey& e) { return e.same_link(fk); });
      if (!dup) catalog_.fk_edges.push_back(fk);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t statement_ = 0;
  SchemaCatalog catalog_;
  std::vector<PendingFk> pending_;
};

}  // namespace

SchemaCatalog ingest_ddl(std::string_view ddl_text, std::string catalog_name) {
  std::vector<Token> tokens;
  try {
    tokens = sql::tokenize(ddl_text);
  } catch (const SyntaxError& e) {
    // Statement index is the number of ';' before the failing offset.
    const auto idx = static_cast<std::size_t>(
        std::count(ddl_text.begin(), ddl_text.begin() + static_cast<std::ptrdiff_t>(
                                                            std::min(e.position(), ddl_text.size())),
                   ';'));
    throw DdlSyntaxError(idx, e.position(), e.what());
  }
  DdlParser parser(std::move(tokens), std::move(catalog_name));
  SchemaCatalog catalog = parser.run();
  catalog.check_invariants();
  return catalog;
}

std::string render_type(const ColumnDef& column) {
  std::string out;
  switch (column.sql_type) {
    case SqlType::kInteger: out = "INTEGER"; break;
    case SqlType::kDecimal: out = "DECIMAL"; break;
    case SqlType::kFloat: out = "FLOAT"; break;
    case SqlType::kChar: out = "CHAR"; break;
    case SqlType::kVarchar: out = "VARCHAR"; break;
    case SqlType::kDate: out = "DATE"; break;
    case SqlType::kBoolean: out = "BOOLEAN"; break;
  }
  if (!column.type_args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < column.type_args.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(column.type_args[i]);
    }
    out += ")";
  }
  return out;
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

std::vector<std::string> render_create_statements(
    const SchemaCatalog& catalog, const std::optional<std::set<std::string>>& table_filter,
    const std::optional<ColumnFilter>& column_filter, const RenderOptions& options) {
  if (table_filter)
    for (const auto& t : *table_filter)
      if (!catalog.find_table(t)) throw UnknownObjectError("unknown table '" + t + "' in filter");
  if (column_filter) {
    for (const auto& [t, cols] : *column_filter) {
      const TableDef* def = catalog.find_table(t);
      if (!def) throw UnknownObjectError("unknown table '" + t + "' in column filter");
      for (const auto& c : cols)
        if (!def->find_column(c))
          throw UnknownObjectError("unknown column '" + t + "." + c + "' in column filter");
    }
  }

  std::vector<std::string> out;
  for (const auto& table : catalog.tables) {
    if (table_filter && !table_filter->count(table.name)) continue;
    const std::set<std::string>* keep = nullptr;
    if (column_filter) {
      auto it = column_filter->find(table.name);
      if (it != column_filter->end()) keep = &it->second;
    }
    auto kept = [&](const std::string& c) { return !keep || keep->count(c) > 0; };

    std::vector<std::string> lines;
    for (const auto& col : table.columns) {
      if (!kept(col.name)) continue;
      std::string line = "  " + col.name + " " + render_type(col);
      if (!col.nullable) line += " NOT NULL";
      lines.push_back(std::move(line));
    }
    if (!table.primary_key.empty() &&
        std::all_of(table.primary_key.begin(), table.primary_key.end(), kept))
      lines.push_back("  PRIMARY KEY (" + join(table.primary_key) + ")");
    if (options.include_foreign_keys) {
      for (const auto& fk : catalog.fk_edges) {
        if (fk.from_table != table.name) continue;
        if (fk.provenance == FkProvenance::kInferred && !options.include_inferred_foreign_keys)
          continue;
        if (!std::all_of(fk.from_columns.begin(), fk.from_columns.end(), kept)) continue;
        lines.push_back("  FOREIGN KEY (" + join(fk.from_columns) + ") REFERENCES " +
                        fk.to_table + " (" + join(fk.to_columns) + ")");
      }
    }
    std::string stmt = "CREATE TABLE " + table.name + " (\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
      stmt += lines[i];
      stmt += i + 1 < lines.size() ? ",\n" : "\n";
    }
    stmt += ");";
    out.push_back(std::move(stmt));
  }
  return out;
}

}  // namespace querygen
