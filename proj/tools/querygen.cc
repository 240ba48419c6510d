// querygen command-line front end. Each subcommand wraps one library module;
// `run` drives the whole pipeline from a TOML config.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "querygen/catalog.h"
#include "querygen/config.h"
#include "querygen/coverage.h"
#include "querygen/error.h"
#include "querygen/evaluation.h"
#include "querygen/execution.h"
#include "querygen/hash.h"
#include "querygen/jsonl.h"
#include "querygen/llm.h"
#include "querygen/mech_generator.h"
#include "querygen/pipeline.h"
#include "querygen/record.h"
#include "querygen/schema.h"
#include "querygen/subschema.h"
#include "querygen/tpch_data.h"
#include "querygen/validate.h"

namespace fs = std::filesystem;
using namespace querygen;

namespace {

enum Exit { kOk = 0, kStageFatal = 1, kConfigError = 2 };

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool json_errors = false;
};

std::optional<PipelineConfig> maybe_config(const Globals& g) {
  if (g.config.empty()) return std::nullopt;
  auto c = load_config(g.config);
  if (g.seed) {
    c.seed = *g.seed;
    c.mechanical.generator.seed = *g.seed;
  }
  return c;
}

void require_out(const Globals& g) {
  if (g.out.empty()) throw ConfigError("--out is required for this command");
}

void write_file(const std::string& path, const std::string& text) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

// --catalog wins; otherwise the config's schema section is ingested.
SchemaCatalog catalog_from(const std::string& catalog_path, const Globals& g) {
  if (!catalog_path.empty()) return load_catalog(catalog_path);
  if (auto c = maybe_config(g)) return prepare_catalog(c->schema);
  throw ConfigError("need --catalog or --config");
}

std::map<std::string, Subschema> subschemas_by_id(const std::string& path) {
  std::map<std::string, Subschema> out;
  if (path.empty()) return out;
  for (auto& s : read_subschemas(path)) out.emplace(s.id, std::move(s));
  return out;
}

std::string group_of(const QueryRecord& r) {
  return r.prompt_setting ? r.prompt_setting->label() : std::string(kOriginMechanical);
}

// preprocess ------------------------------------------------------------------

struct PreprocessArgs {
  std::string ddl;
  std::string data_dir;
  bool no_infer = false;
  std::vector<std::string> prefixes;  // table=prefix
};

int cmd_preprocess(const PreprocessArgs& a, const Globals& g) {
  require_out(g);
  SchemaConfig sc;
  if (auto c = maybe_config(g)) sc = c->schema;
  if (!a.ddl.empty()) sc.ddl = a.ddl;
  if (!a.data_dir.empty()) sc.data_dir = a.data_dir;
  if (a.no_infer) sc.infer_foreign_keys = false;
  for (const auto& p : a.prefixes) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw ConfigError("--prefix expects table=prefix, got '" + p + "'");
    sc.inference.prefixes[to_lower(p.substr(0, eq))] = p.substr(eq + 1);
  }
  if (sc.ddl.empty()) throw ConfigError("need --ddl or a config with schema.ddl");
  const auto catalog = prepare_catalog(sc);
  save_catalog(catalog, g.out);
  std::cout << "tables=" << catalog.tables.size()
            << " declared_fks=" << catalog.count_fks(FkProvenance::kDeclared)
            << " inferred_fks=" << catalog.count_fks(FkProvenance::kInferred)
            << " views=" << catalog.views.size() << " advisories=" << catalog.advisories.size()
            << "\n";
  for (const auto& adv : catalog.advisories) std::cerr << "advisory: " << adv << "\n";
  return kOk;
}

// subschemas ------------------------------------------------------------------

struct SubschemaArgs {
  std::string catalog;
  std::size_t min_tables = 1;
  std::size_t max_tables = 0;
  std::string provenance = "all";
  bool counts = false;
};

int cmd_subschemas(const SubschemaArgs& a, const Globals& g) {
  const auto catalog = catalog_from(a.catalog, g);
  if (a.counts) {
    // Every combination of edge set and singleton policy.
    std::cout << "provenance,singletons,subschemas\n";
    for (const std::string prov : {"declared", "inferred", "all"}) {
      for (const bool singletons : {true, false}) {
        SubschemaConfig sc;
        sc.provenance = prov;
        sc.min_tables = singletons ? 1 : 2;
        std::cout << prov << "," << (singletons ? "with" : "without") << ","
                  << prepare_subschemas(catalog, sc).size() << "\n";
      }
    }
    if (g.out.empty()) return kOk;
  }
  require_out(g);
  SubschemaConfig sc;
  if (auto c = maybe_config(g)) sc = c->subschemas;
  sc.provenance = a.provenance;
  sc.min_tables = a.min_tables;
  if (a.max_tables) sc.max_tables = a.max_tables;
  const auto list = prepare_subschemas(catalog, sc);
  write_subschemas(list, g.out);
  std::cout << "subschemas=" << list.size() << "\n";
  return kOk;
}

// gen-mech --------------------------------------------------------------------

struct GenMechArgs {
  std::string catalog;
  std::string subschemas;
  std::size_t n = 10;
  std::optional<double> p_group_by;
  std::optional<double> p_order_by;
};

int cmd_gen_mech(const GenMechArgs& a, const Globals& g) {
  require_out(g);
  const auto catalog = catalog_from(a.catalog, g);
  MechConfig mc;
  std::vector<Subschema> subs;
  if (auto c = maybe_config(g)) {
    mc = c->mechanical.generator;
    if (a.subschemas.empty()) subs = prepare_subschemas(catalog, c->subschemas);
  }
  if (!a.subschemas.empty()) subs = read_subschemas(a.subschemas);
  if (subs.empty()) throw ConfigError("need --subschemas or --config");
  if (g.seed) mc.seed = *g.seed;
  if (a.p_group_by) mc.p_group_by = *a.p_group_by;
  if (a.p_order_by) mc.p_order_by = *a.p_order_by;
  mc.validate();
  std::vector<QueryRecord> out;
  for (const auto& s : subs) {
    auto batch = generate_mechanical(s, catalog, mc, a.n);
    out.insert(out.end(), batch.begin(), batch.end());
  }
  write_records(out, g.out);
  std::cout << "queries=" << out.size() << " subschemas=" << subs.size() << "\n";
  return kOk;
}

// gen-llm ---------------------------------------------------------------------

struct GenLlmArgs {
  std::string catalog;
  std::string subschemas;
  std::string pool;
  std::vector<std::string> settings;
  std::string stub_dir;
};

int cmd_gen_llm(const GenLlmArgs& a, const Globals& g) {
  require_out(g);
  auto config = maybe_config(g);
  LlmConfig lc = config ? config->llm : LlmConfig{};
  if (!a.stub_dir.empty()) {
    lc.backend = "stub";
    lc.stub_dir = a.stub_dir;
  }
  if (!a.settings.empty()) {
    lc.settings.clear();
    for (const auto& s : a.settings) lc.settings.push_back(PromptSetting::from_label(s));
  }
  lc.params.validate();
  if (lc.backend == "stub" && lc.stub_dir.empty()) throw ConfigError("need --stub-dir or llm settings in --config");
  const std::uint64_t seed = g.seed ? *g.seed : (config ? config->seed : 0);

  const auto catalog = catalog_from(a.catalog, g);
  std::vector<Subschema> subs;
  if (!a.subschemas.empty()) subs = read_subschemas(a.subschemas);
  else if (config) subs = prepare_subschemas(catalog, config->subschemas);
  else throw ConfigError("need --subschemas or --config");

  std::map<std::string, std::vector<QueryRecord>> pools;
  if (!a.pool.empty())
    for (auto& r : read_records(a.pool)) pools[r.subschema_id].push_back(std::move(r));

  auto backend = make_backend(lc);
  std::vector<QueryRecord> out;
  std::size_t failures = 0;
  for (const auto& setting : lc.settings) {
    for (const auto& sub : subs) {
      std::vector<SeedExample> examples;
      try {
        if (setting.shots > 0) {
          std::optional<std::string> tag;
          if (setting.bias != ClauseBias::kNone) tag = std::string(to_string(setting.bias));
          examples = select_seed_examples(pools[sub.id], static_cast<std::size_t>(setting.shots), tag,
                                          lc.bias_weight,
                                          derive_seed(seed, "examples:" + setting.label() + ":" + sub.id));
        }
        const auto prompt = build_prompt(sub, catalog, setting, examples, lc.texts);
        const auto result = generate_llm(prompt, *backend, lc.params);
        for (const auto& completion : result.completions) {
          const auto statements = extract_sql(completion);
          auto r = make_record(statements.empty() ? completion : statements.front(), kOriginLlm, sub.id, 0);
          r.prompt_setting = setting;
          r.prompt_hash = stable_hash(prompt);
          r.model_name = backend->model_name();
          r.generation_params = lc.params;
          for (const auto& e : examples) r.example_ids.push_back(e.id);
          out.push_back(std::move(r));
        }
      } catch (const InsufficientPoolError& e) {
        ++failures;
        std::cerr << "skipped " << setting.label() << " on " << sub.id << ": " << e.what() << "\n";
      } catch (const BackendError& e) {
        ++failures;
        std::cerr << "backend failed for " << setting.label() << " on " << sub.id << ": " << e.what() << "\n";
      }
    }
  }
  write_records(out, g.out);
  std::cout << "completions=" << out.size() << " failures=" << failures << "\n";
  return kOk;
}

// validate --------------------------------------------------------------------

struct ValidateArgs {
  std::string catalog;
  std::string subschemas;
  std::string in;
  std::string rejected;
  bool require_all = false;
};

int cmd_validate(const ValidateArgs& a, const Globals& g) {
  require_out(g);
  const auto catalog = catalog_from(a.catalog, g);
  const auto subs = subschemas_by_id(a.subschemas);
  RelevanceOptions ro;
  ro.require_all_subschema_tables = a.require_all;
  std::vector<QueryRecord> candidates = read_records(a.in);
  std::vector<QueryRecord> accepted, rejected;
  std::map<std::string, std::size_t> by_reason;
  for (auto& r : candidates) {
    auto it = subs.find(r.subschema_id);
    r.validation = validate_query(r.sql, catalog, it == subs.end() ? nullptr : &it->second, ro);
    if (r.validation->accepted()) {
      accepted.push_back(std::move(r));
    } else {
      ++by_reason[std::string(to_string(r.validation->rejection_reasons.front()))];
      rejected.push_back(std::move(r));
    }
  }
  auto [kept, dups] = deduplicate(std::move(accepted));
  for (auto& r : kept) r.profile = profile_query(r.sql, catalog);
  by_reason["duplicate"] += dups.size();
  rejected.insert(rejected.end(), dups.begin(), dups.end());
  write_records(kept, g.out);
  if (!a.rejected.empty()) write_records(rejected, a.rejected);
  std::cout << "generated=" << candidates.size() << " kept=" << kept.size();
  for (const auto& [reason, n] : by_reason) std::cout << " " << reason << "=" << n;
  std::cout << "\n";
  return kOk;
}

// coverage --------------------------------------------------------------------

struct CoverageArgs {
  std::string catalog;
  std::string in;
  std::string csv_prefix;
};

std::vector<CoverageReport> coverage_reports(const std::vector<QueryRecord>& records,
                                             const SchemaCatalog& catalog, const CoverageTargets& targets) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<ComplexityProfile>> groups;
  std::vector<ComplexityProfile> all;
  for (const auto& r : records) {
    const auto p = r.profile ? *r.profile : profile_query(r.sql, catalog);
    const auto gname = group_of(r);
    if (!groups.count(gname)) order.push_back(gname);
    groups[gname].push_back(p);
    all.push_back(p);
  }
  std::vector<CoverageReport> reports;
  reports.push_back(aggregate_coverage(all, "all", catalog, targets));
  for (const auto& gname : order) reports.push_back(aggregate_coverage(groups[gname], gname, catalog, targets));
  return reports;
}

int cmd_coverage(const CoverageArgs& a, const Globals& g) {
  require_out(g);
  const auto catalog = catalog_from(a.catalog, g);
  CoverageTargets targets;
  if (auto c = maybe_config(g)) targets = c->coverage;
  const auto reports = coverage_reports(read_records(a.in), catalog, targets);
  nlohmann::ordered_json doc;
  doc["schema_version"] = kJsonlSchemaVersion;
  doc["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) doc["reports"].push_back(to_json(r));
  write_file(g.out, doc.dump(2) + "\n");
  if (!a.csv_prefix.empty()) {
    write_file(a.csv_prefix + "_facets.csv", facets_csv(reports));
    write_file(a.csv_prefix + "_clauses.csv", clause_presence_csv(reports));
  }
  std::cout << "queries=" << reports.front().query_count << " gaps=" << reports.front().gaps.size() << "\n";
  for (const auto& gap : reports.front().gaps)
    std::cout << "gap " << to_string(gap.kind) << " " << gap.subject << " observed=" << gap.observed_freq
              << " target=" << gap.target_freq << "\n";
  return kOk;
}

// execute ---------------------------------------------------------------------

struct ExecuteArgs {
  std::string catalog;
  std::string in;
  std::string data_dir;
  std::uint64_t max_rows = 40'000;
  double timeout_ms = 0;
  double min_empty_ms = -1;
  std::string labels_out;
};

int cmd_execute(const ExecuteArgs& a, const Globals& g) {
  require_out(g);
  const auto catalog = catalog_from(a.catalog, g);
  ExecutionConfig ec;
  if (auto c = maybe_config(g)) ec = c->execution;
  if (ec.engines.empty()) {
    if (a.data_dir.empty()) throw ConfigError("need --data-dir or execution.engines in --config");
    EngineSpec spec;
    spec.engine_id = "sqlite";
    spec.data_dir = a.data_dir;
    spec.max_rows_per_table = a.max_rows;
    ec.engines.push_back(spec);
  }
  if (a.timeout_ms > 0) ec.timeout_ms = a.timeout_ms;
  if (a.min_empty_ms >= 0) ec.min_empty_runtime_ms = a.min_empty_ms;

  auto records = read_records(a.in);
  const auto labels = execute_engines(records, ec.engines, catalog, ec.timeout_ms);
  std::vector<RuntimeLabel> flat;
  for (const auto& [engine, list] : labels) flat.insert(flat.end(), list.begin(), list.end());
  const auto retention = apply_retention(flat, ec.min_empty_runtime_ms);
  std::set<std::string> dropped;
  for (const auto& [label, reason] : retention.dropped) dropped.insert(label.query_id);

  std::vector<QueryRecord> kept;
  std::size_t errors = 0, timeouts = 0;
  for (auto& r : records) {
    for (const auto& l : flat)
      if (l.query_id == r.id) {
        r.labels[l.engine_id] = l;
        errors += l.error.has_value();
        timeouts += l.timed_out;
      }
    if (!dropped.count(r.id)) kept.push_back(std::move(r));
  }
  write_records(kept, g.out);
  if (!a.labels_out.empty()) {
    std::vector<nlohmann::ordered_json> rows;
    for (const auto& l : flat) rows.push_back(to_json(l));
    write_jsonl(a.labels_out, "runtime_labels", rows);
  }
  std::cout << "executed=" << records.size() << " labels=" << flat.size() << " errors=" << errors
            << " timeouts=" << timeouts << " retained=" << kept.size() << "\n";
  return kOk;
}

// evaluate --------------------------------------------------------------------

struct EvaluateArgs {
  std::vector<std::string> predictions;  // [name=]path
  bool json = false;
};

int cmd_evaluate(const EvaluateArgs& a, const Globals& g) {
  std::vector<std::pair<std::string, QErrorSummary>> rows;
  std::vector<std::pair<std::string, RoutingResult>> routes;
  for (const auto& spec : a.predictions) {
    const auto eq = spec.find('=');
    const std::string name = eq == std::string::npos ? fs::path(spec).stem().string() : spec.substr(0, eq);
    const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    const auto matrix = matrix_from_rows(load_prediction_rows(path));
    rows.emplace_back(name, summarize(matrix));
    routes.emplace_back(name, route(matrix));
  }
  nlohmann::ordered_json doc;
  doc["sources"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nlohmann::ordered_json s;
    s["name"] = rows[i].first;
    s["summary"] = to_json(rows[i].second);
    s["routing"] = to_json(routes[i].second);
    if (i > 0) s["routing_improvement_vs_first"] = compare_routing(routes[0].second, routes[i].second);
    doc["sources"].push_back(std::move(s));
  }
  if (!g.out.empty()) write_file(g.out, doc.dump(2) + "\n");
  if (a.json) {
    std::cout << doc.dump(2) << "\n";
    return kOk;
  }
  std::cout << format_summary_table(rows) << "\n" << format_engine_table(rows);
  for (std::size_t i = 1; i < routes.size(); ++i)
    std::cout << "\nrouting " << routes[i].first << " vs " << routes[0].first << ": "
              << compare_routing(routes[0].second, routes[i].second) * 100 << "% less time\n";
  return kOk;
}

// run -------------------------------------------------------------------------

int cmd_run(const Globals& g) {
  if (g.config.empty()) throw ConfigError("run needs --config");
  auto config = *maybe_config(g);
  if (!g.out.empty()) config.out_dir = g.out;
  const auto result = run_pipeline(config);
  const auto& t = result.manifest.at("totals");
  std::cout << "generated=" << t.at("generated") << " kept=" << t.at("kept")
            << " deduplicated=" << t.at("deduplicated") << " rejected=" << t.at("rejected_total")
            << " llm_calls=" << t.at("llm_calls") << " selected=" << result.corpus.size()
            << " out=" << config.out_dir << "\n";
  if (!result.resumed_batches.empty())
    std::cerr << "reused " << result.resumed_batches.size() << " checkpointed batch(es)\n";
  return kOk;
}

// report ----------------------------------------------------------------------

struct ReportArgs {
  std::string catalog;
  std::string in;
  std::string format = "csv";
};

// Clause presence, facet statistics and runtime buckets per setting.
int cmd_report(const ReportArgs& a, const Globals& g) {
  require_out(g);
  const auto catalog = catalog_from(a.catalog, g);
  const auto records = read_records(a.in);
  const auto reports = coverage_reports(records, catalog, {});

  std::map<std::string, std::map<std::string, std::map<std::string, std::size_t>>> buckets;
  for (const auto& r : records)
    for (const auto& [engine, l] : r.labels)
      if (!l.error) ++buckets[group_of(r)][engine][std::string(to_string(bucket_runtime(l)))];

  fs::create_directories(g.out);
  const fs::path dir(g.out);
  if (a.format == "json") {
    nlohmann::ordered_json doc;
    doc["clause_presence"] = nlohmann::ordered_json::object();
    doc["facets"] = nlohmann::ordered_json::object();
    for (const auto& r : reports) {
      doc["clause_presence"][r.setting] = r.clause_presence;
      for (const auto& [facet, st] : r.facets)
        doc["facets"][r.setting][facet] = {{"mean", st.mean}, {"std", st.std}, {"min", st.min}, {"max", st.max}};
    }
    doc["runtime_buckets"] = buckets;
    write_file((dir / "report.json").string(), doc.dump(2) + "\n");
  } else if (a.format == "csv") {
    write_file((dir / "clause_presence.csv").string(), clause_presence_csv(reports));
    write_file((dir / "facets.csv").string(), facets_csv(reports));
    std::string csv = "setting,engine,bucket,count\n";
    for (const auto& [setting, engines] : buckets)
      for (const auto& [engine, counts] : engines)
        for (const auto& [bucket, n] : counts)
          csv += setting + "," + engine + "," + bucket + "," + std::to_string(n) + "\n";
    write_file((dir / "runtime_buckets.csv").string(), csv);
  } else {
    throw ConfigError("--format must be csv or json");
  }
  std::cout << "records=" << records.size() << " settings=" << reports.size() - 1 << " out=" << g.out << "\n";
  return kOk;
}

// tpch-data -------------------------------------------------------------------

int cmd_tpch_data(TpchSynthOptions o, const Globals& g) {
  require_out(g);
  if (g.seed) o.seed = *g.seed;
  for (const auto& [table, n] : write_tpch_tbl(g.out, o)) std::cout << table << "=" << n << "\n";
  return kOk;
}

void report_error(const Globals& g, const std::string& code, const std::string& message, int exit_code) {
  if (g.json_errors) {
    nlohmann::ordered_json j;
    j["error"] = {{"code", code}, {"message", message}, {"exit_code", exit_code}};
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << "querygen: " << message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"querygen: schema-aware synthetic SQL workloads for learned cost models"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "TOML pipeline config")->option_text("PATH");
  app.add_option("--seed", g.seed, "Global seed override");
  app.add_option("--out", g.out, "Output file or directory");
  app.add_flag("--json-errors", g.json_errors, "Print errors as JSON on stderr");
  app.fallthrough();

  PreprocessArgs pre;
  auto* sp = app.add_subcommand("preprocess", "DDL -> catalog JSON");
  sp->add_option("--ddl", pre.ddl, "CREATE TABLE script");
  sp->add_option("--data-dir", pre.data_dir, "Directory of .tbl/.csv files for column profiling");
  sp->add_flag("--no-infer", pre.no_infer, "Skip foreign-key inference");
  sp->add_option("--prefix", pre.prefixes, "Column prefix rule table=prefix (repeatable)");

  SubschemaArgs sub;
  auto* ss = app.add_subcommand("subschemas", "Enumerate connected table groups");
  ss->add_option("--catalog", sub.catalog);
  ss->add_option("--min", sub.min_tables, "Smallest subschema size");
  ss->add_option("--max", sub.max_tables, "Largest subschema size (0 = no limit)");
  ss->add_option("--provenance", sub.provenance)->check(CLI::IsMember({"all", "declared", "inferred"}));
  ss->add_flag("--counts", sub.counts, "Print counts for every edge-set/singleton combination");

  GenMechArgs mech;
  auto* sm = app.add_subcommand("gen-mech", "Mechanical query generation");
  sm->add_option("--catalog", mech.catalog);
  sm->add_option("--subschemas", mech.subschemas);
  sm->add_option("-n,--count", mech.n, "Queries per subschema");
  sm->add_option("--p-group-by", mech.p_group_by);
  sm->add_option("--p-order-by", mech.p_order_by);

  GenLlmArgs llm;
  auto* sl = app.add_subcommand("gen-llm", "Prompted generation through the configured backend");
  sl->add_option("--catalog", llm.catalog);
  sl->add_option("--subschemas", llm.subschemas);
  sl->add_option("--pool", llm.pool, "Mechanical records used as seed examples");
  sl->add_option("--setting", llm.settings, "Prompt setting such as 3shot-group_by (repeatable)");
  sl->add_option("--stub-dir", llm.stub_dir, "Use the stub backend with this fixture directory");

  ValidateArgs val;
  auto* sv = app.add_subcommand("validate", "Syntax, relevance and duplicate filtering");
  sv->add_option("--catalog", val.catalog);
  sv->add_option("--subschemas", val.subschemas);
  sv->add_option("--in", val.in)->required();
  sv->add_option("--rejected", val.rejected, "Write rejected records here");
  sv->add_flag("--require-all-tables", val.require_all);

  CoverageArgs cov;
  auto* sc = app.add_subcommand("coverage", "Coverage report for a record file");
  sc->add_option("--catalog", cov.catalog);
  sc->add_option("--in", cov.in)->required();
  sc->add_option("--csv", cov.csv_prefix, "Also write <prefix>_facets.csv and <prefix>_clauses.csv");

  ExecuteArgs ex;
  auto* se = app.add_subcommand("execute", "Label records with runtimes");
  se->add_option("--catalog", ex.catalog);
  se->add_option("--in", ex.in)->required();
  se->add_option("--data-dir", ex.data_dir, "Load this data into an in-process sqlite engine");
  se->add_option("--max-rows", ex.max_rows, "Rows kept per table");
  se->add_option("--timeout-ms", ex.timeout_ms);
  se->add_option("--min-empty-ms", ex.min_empty_ms, "Retention threshold for empty results");
  se->add_option("--labels", ex.labels_out, "Write every runtime label here");

  EvaluateArgs ev;
  auto* sx = app.add_subcommand("evaluate", "Q-error and routing summary");
  sx->add_option("--predictions", ev.predictions, "[name=]path to CSV or JSONL (repeatable)")->required();
  sx->add_flag("--json", ev.json);

  auto* sr = app.add_subcommand("run", "Full pipeline from --config");

  ReportArgs rep;
  auto* sq = app.add_subcommand("report", "Clause, facet and runtime-bucket tables");
  sq->add_option("--catalog", rep.catalog);
  sq->add_option("--in", rep.in)->required();
  sq->add_option("--format", rep.format)->check(CLI::IsMember({"csv", "json"}));

  TpchSynthOptions tpch;
  auto* st = app.add_subcommand("tpch-data", "Write a small synthetic TPC-H data set (.tbl)");
  st->add_option("--orders", tpch.orders);
  st->add_option("--parts", tpch.parts);
  st->add_option("--suppliers", tpch.suppliers);
  st->add_option("--customers", tpch.customers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    if (g.json_errors) {
      report_error(g, "usage", e.what(), kConfigError);
      return kConfigError;
    }
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*sp) return cmd_preprocess(pre, g);
    if (*ss) return cmd_subschemas(sub, g);
    if (*sm) return cmd_gen_mech(mech, g);
    if (*sl) return cmd_gen_llm(llm, g);
    if (*sv) return cmd_validate(val, g);
    if (*sc) return cmd_coverage(cov, g);
    if (*se) return cmd_execute(ex, g);
    if (*sx) return cmd_evaluate(ev, g);
    if (*sr) return cmd_run(g);
    if (*sq) return cmd_report(rep, g);
    if (*st) return cmd_tpch_data(tpch, g);
  } catch (const ConfigError& e) {
    report_error(g, e.code(), e.what(), kConfigError);
    return kConfigError;
  } catch (const Error& e) {
    report_error(g, e.code(), e.what(), kStageFatal);
    return kStageFatal;
  } catch (const std::exception& e) {
    report_error(g, "internal", e.what(), kStageFatal);
    return kStageFatal;
  }
  return kOk;
}
