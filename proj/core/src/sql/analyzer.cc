#include "querygen/sql/analyzer.h"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

namespace querygen::sql {

const ColumnDef* Analysis::base_column(const Expr* e, const SchemaCatalog& catalog) const {
  const Binding* b = binding(e);
  if (!b || b->kind != BindingKind::kBaseColumn) return nullptr;
  return catalog.find_column(b->table, b->column);
}

namespace {

struct Source {
  std::string visible;
  const TableDef* table = nullptr;   // set for base tables
  std::vector<std::string> columns;  // output columns
  bool open = false;                 // unknown shape: any column resolves

  bool has_column(const std::string& c) const {
    return open || std::find(columns.begin(), columns.end(), c) != columns.end();
  }
};

struct Scope {
  const Scope* parent = nullptr;
  std::vector<Source> sources;
  std::set<std::string> join_columns;  // USING columns
  bool natural = false;
};

// Output column lists of visible CTEs, innermost last.
struct CteEnv {
  std::map<std::string, std::vector<std::string>> named;
  std::set<std::string> open;  // recursive CTEs without a column list
};

struct OutputAliases {
  const std::vector<SelectItem>* items = nullptr;
};

class Analyzer {
 public:
  Analyzer(const SchemaCatalog& catalog, Analysis& out) : catalog_(catalog), out_(out) {}

  std::vector<std::string> query(const Query& q, const Scope* outer, CteEnv env) {
    for (const Cte& cte : q.with) {
      if (q.recursive) {
        if (!cte.columns.empty()) env.named[cte.name] = cte.columns;
        else env.open.insert(cte.name);
      }
      auto names = query(*cte.query, outer, env);
      if (!cte.columns.empty()) names = cte.columns;
      env.open.erase(cte.name);
      env.named[cte.name] = std::move(names);
    }

    std::vector<std::string> names;
    if (q.select) {
      names = select(*q.select, outer, env);
    } else if (q.is_set_op()) {
      names = query(*q.left, outer, env);
      query(*q.right, outer, env);
    } else if (q.nested) {
      names = query(*q.nested, outer, env);
    }

    if (!q.order_by.empty() || q.limit || q.offset) {
      Scope s;
      s.parent = outer;
      Source src;
      src.columns = names;
      s.sources.push_back(std::move(src));
      for (const auto& item : q.order_by) expr(*item.expr, s, env, nullptr);
      if (q.limit) expr(*q.limit, s, env, nullptr);
      if (q.offset) expr(*q.offset, s, env, nullptr);
    }
    return names;
  }

 private:
  std::vector<std::string> select(const Select& sel, const Scope* outer, const CteEnv& env) {
    Scope scope;
    scope.parent = outer;
    for (const auto& ref : sel.from) from_item(*ref, scope, outer, env);

    std::vector<std::string> outputs;
    for (const auto& item : sel.items) {
      const Expr& e = *item.expr;
      if (e.kind == ExprKind::kStar) {
        star(e, scope, outputs);
        continue;
      }
      expr(e, scope, env, nullptr);
      if (!item.alias.empty()) outputs.push_back(item.alias);
      else if (e.kind == ExprKind::kColumn) outputs.push_back(e.name);
      else outputs.emplace_back();
    }

    OutputAliases aliases{&sel.items};
    if (sel.where) expr(*sel.where, scope, env, nullptr);
    for (const auto& g : sel.group_by) expr(*g, scope, env, &aliases);
    if (sel.having) expr(*sel.having, scope, env, &aliases);
    for (const auto& o : sel.order_by) expr(*o.expr, scope, env, &aliases);
    if (sel.limit) expr(*sel.limit, scope, env, nullptr);
    if (sel.offset) expr(*sel.offset, scope, env, nullptr);
    return outputs;
  }

  void star(const Expr& e, const Scope& scope, std::vector<std::string>& outputs) {
    if (!e.qualifier.empty()) {
      for (const auto& s : scope.sources) {
        if (s.visible == e.qualifier) {
          outputs.insert(outputs.end(), s.columns.begin(), s.columns.end());
          return;
        }
      }
      out_.issues.push_back({IssueKind::kUnknownQualifier, e.qualifier, e.position});
      return;
    }
    for (const auto& s : scope.sources)
      outputs.insert(outputs.end(), s.columns.begin(), s.columns.end());
  }

  void from_item(const TableRef& ref, Scope& scope, const Scope* outer, const CteEnv& env) {
    switch (ref.kind) {
      case TableRefKind::kTable: {
        Source src;
        src.visible = ref.alias.empty() ? ref.name : ref.alias;
        if (auto it = env.named.find(ref.name); it != env.named.end()) {
          src.columns = it->second;
        } else if (env.open.count(ref.name)) {
          src.open = true;
        } else if (const TableDef* t = catalog_.find_table(ref.name)) {
          src.table = t;
          for (const auto& c : t->columns) src.columns.push_back(c.name);
          out_.table_uses.push_back(t->name);
        } else {
          out_.issues.push_back({IssueKind::kUnknownTable, ref.name, ref.position});
          src.open = true;
        }
        if (!ref.column_aliases.empty()) src.columns = ref.column_aliases;
        scope.sources.push_back(std::move(src));
        return;
      }
      case TableRefKind::kDerived: {
        Source src;
        src.visible = ref.alias;
        src.columns = query(*ref.subquery, outer, env);
        if (!ref.column_aliases.empty()) src.columns = ref.column_aliases;
        scope.sources.push_back(std::move(src));
        return;
      }
      case TableRefKind::kJoin: {
        from_item(*ref.left, scope, outer, env);
        from_item(*ref.right, scope, outer, env);
        for (const auto& c : ref.using_columns) scope.join_columns.insert(c);
        if (ref.natural) scope.natural = true;
        if (ref.on) expr(*ref.on, scope, env, nullptr);
        return;
      }
    }
  }

  void expr(const Expr& e, const Scope& scope, const CteEnv& env, const OutputAliases* aliases) {
    switch (e.kind) {
      case ExprKind::kColumn:
        column(e, scope, aliases);
        break;
      case ExprKind::kStar:
        if (!e.qualifier.empty()) {
          bool found = false;
          for (const Scope* s = &scope; s && !found; s = s->parent)
            for (const auto& src : s->sources)
              if (src.visible == e.qualifier) found = true;
          if (!found) out_.issues.push_back({IssueKind::kUnknownQualifier, e.qualifier, e.position});
        }
        break;
      default:
        break;
    }
    for (const auto& a : e.args) expr(*a, scope, env, aliases);
    if (e.filter) expr(*e.filter, scope, env, aliases);
    if (e.over) {
      for (const auto& p : e.over->partition_by) expr(*p, scope, env, aliases);
      for (const auto& o : e.over->order_by) expr(*o.expr, scope, env, aliases);
    }
    if (e.subquery) query(*e.subquery, &scope, env);
  }

  void column(const Expr& e, const Scope& scope, const OutputAliases* aliases) {
    if (!e.qualifier.empty()) {
      for (const Scope* s = &scope; s; s = s->parent) {
        for (const auto& src : s->sources) {
          if (src.visible != e.qualifier) continue;
          if (!src.has_column(e.name)) {
            out_.issues.push_back({IssueKind::kUnknownColumn, e.qualifier + "." + e.name, e.position});
            return;
          }
          bind(e, src);
          return;
        }
      }
      out_.issues.push_back({IssueKind::kUnknownQualifier, e.qualifier, e.position});
      return;
    }

    bool first_level = true;
    for (const Scope* s = &scope; s; s = s->parent) {
      const Source* concrete = nullptr;
      const Source* open = nullptr;
      int concrete_matches = 0;
      for (const auto& src : s->sources) {
        if (src.open) {
          if (!open) open = &src;
        } else if (src.has_column(e.name)) {
          if (!concrete) concrete = &src;
          ++concrete_matches;
        }
      }
      if (concrete_matches > 1 && !(s->natural || s->join_columns.count(e.name))) {
        out_.issues.push_back({IssueKind::kAmbiguousColumn, e.name, e.position});
        return;
      }
      if (concrete) {
        bind(e, *concrete);
        return;
      }
      if (first_level && aliases && aliases->items) {
        for (const auto& item : *aliases->items) {
          if (item.alias == e.name) {
            out_.bindings[&e] = Binding{BindingKind::kOutputAlias, {}, e.name};
            return;
          }
        }
      }
      // Unknown-shaped sources (unknown tables, open recursive CTEs) absorb
      // the name; the unknown table itself has already been reported.
      if (open) {
        bind(e, *open);
        return;
      }
      first_level = false;
    }
    out_.issues.push_back({IssueKind::kUnknownColumn, e.name, e.position});
  }

  void bind(const Expr& e, const Source& src) {
    if (src.table) {
      out_.bindings[&e] = Binding{BindingKind::kBaseColumn, src.table->name, e.name};
      out_.column_uses.push_back({src.table->name, e.name, &e});
    } else {
      out_.bindings[&e] = Binding{BindingKind::kDerivedColumn, src.visible, e.name};
    }
  }

  const SchemaCatalog& catalog_;
  Analysis& out_;
};

}  // namespace

Analysis analyze(const Query& query, const SchemaCatalog& catalog) {
  Analysis out;
  Analyzer a(catalog, out);
  a.query(query, nullptr, CteEnv{});
  return out;
}

}  // namespace querygen::sql
