#include "querygen/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <thread>

#include "querygen/coverage.h"
#include "querygen/error.h"
#include "querygen/hash.h"
#include "querygen/jsonl.h"
#include "querygen/random.h"
#include "querygen/schema.h"
#include "querygen/validate.h"

namespace querygen {

namespace fs = std::filesystem;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

std::string group_of(const QueryRecord& r) {
  return r.prompt_setting ? r.prompt_setting->label() : std::string(kOriginMechanical);
}

}  // namespace

SchemaCatalog prepare_catalog(const SchemaConfig& config) {
  SchemaCatalog catalog =
      ingest_ddl(read_text(config.ddl), fs::path(config.ddl).stem().string());
  if (config.infer_foreign_keys) catalog = infer_foreign_keys(catalog, config.inference);
  if (!config.data_dir.empty()) {
    DelimitedFileSampler sampler(config.data_dir, catalog);
    catalog = profile_columns(catalog, sampler, config.profile);
  } else {
    for (const auto& ref : config.profile.label_columns) {
      const auto dot = ref.find('.');
      ColumnDef* c = nullptr;
      if (dot != std::string::npos)
        if (TableDef* t = catalog.find_table(to_lower(ref.substr(0, dot))))
          c = t->find_column(to_lower(ref.substr(dot + 1)));
      if (!c) throw UnknownObjectError("label column '" + ref + "' is not in the catalog");
      c->metadata.is_label = true;
    }
  }
  return catalog;
}

std::vector<Subschema> prepare_subschemas(const SchemaCatalog& catalog,
                                          const SubschemaConfig& config) {
  JoinGraph graph = config.provenance == "declared"   ? build_join_graph(catalog, FkProvenance::kDeclared)
                    : config.provenance == "inferred" ? build_join_graph(catalog, FkProvenance::kInferred)
                                                      : build_join_graph(catalog);
  EnumerateOptions options;
  options.min_tables = config.min_tables;
  options.max_tables = config.max_tables;
  auto all = enumerate_subschemas(graph, options);
  if (config.include.empty()) return all;

  std::set<std::string> wanted;
  for (const auto& entry : config.include) {
    std::vector<std::string> names;
    std::stringstream ss(entry);
    for (std::string part; std::getline(ss, part, ',');) {
      part.erase(0, part.find_first_not_of(" \t"));
      part.erase(part.find_last_not_of(" \t") + 1);
      if (!part.empty()) names.push_back(to_lower(part));
    }
    std::sort(names.begin(), names.end());
    wanted.insert(joined(names));
  }
  std::vector<Subschema> out;
  for (auto& s : all)
    if (wanted.erase(joined(s.tables))) out.push_back(std::move(s));
  if (!wanted.empty())
    throw ConfigError("subschemas.include names '" + *wanted.begin() +
                      "', which is not a connected subschema within the size bounds");
  return out;
}

std::unique_ptr<LlmBackend> make_backend(const LlmConfig& config) {
  if (config.backend == "stub") return std::make_unique<StubBackend>(config.stub_dir, config.model);
  if (config.backend == "http") {
    HttpBackendConfig h = config.http;
    h.model = config.model;
    return std::make_unique<HttpBackend>(h);
  }
  throw ConfigError("unknown llm backend '" + config.backend + "'");
}

std::uint64_t BatchCounts::rejected_total() const {
  std::uint64_t n = 0;
  for (const auto& [reason, count] : rejected) n += count;
  return n;
}

nlohmann::ordered_json to_json(const BatchCounts& c) {
  nlohmann::ordered_json j;
  j["batch"] = c.batch;
  j["generated"] = c.generated;
  j["kept"] = c.kept;
  j["deduplicated"] = c.deduplicated;
  j["rejected"] = c.rejected;
  j["rejected_total"] = c.rejected_total();
  j["llm_calls"] = c.llm_calls;
  j["llm_failures"] = c.llm_failures;
  j["failures"] = c.failures;
  return j;
}

namespace {

BatchCounts batch_counts_from_json(const nlohmann::json& j) {
  BatchCounts c;
  c.batch = j.at("batch").get<int>();
  c.generated = j.at("generated").get<std::uint64_t>();
  c.kept = j.at("kept").get<std::uint64_t>();
  c.deduplicated = j.at("deduplicated").get<std::uint64_t>();
  c.rejected = j.at("rejected").get<std::map<std::string, std::uint64_t>>();
  c.llm_calls = j.at("llm_calls").get<std::uint64_t>();
  c.llm_failures = j.at("llm_failures").get<std::uint64_t>();
  c.failures = j.at("failures").get<std::vector<std::string>>();
  return c;
}

}  // namespace

std::vector<QueryRecord> select_records(const std::vector<QueryRecord>& kept,
                                        const SelectionConfig& selection) {
  if (selection.size == 0 || selection.size >= kept.size()) return kept;
  if (selection.strategy == "first_n")
    return {kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(selection.size)};

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto g = group_of(kept[i]);
    if (!groups.count(g)) order.push_back(g);
    groups[g].push_back(i);
  }
  std::vector<std::size_t> chosen;
  for (std::size_t round = 0; chosen.size() < selection.size; ++round)
    for (const auto& g : order)
      if (round < groups[g].size() && chosen.size() < selection.size)
        chosen.push_back(groups[g][round]);
  std::sort(chosen.begin(), chosen.end());
  std::vector<QueryRecord> out;
  for (auto i : chosen) out.push_back(kept[i]);
  return out;
}

namespace {

struct PromptJob {
  const Subschema* subschema = nullptr;
  PromptSetting setting;
  std::string prompt;
  std::vector<std::string> example_ids;
  std::optional<ColumnFilter> filter;
};

struct JobOutcome {
  GenerationResult result;
  int attempts = 0;
  std::optional<std::string> error;
};

JobOutcome call_backend(LlmBackend& backend, const std::string& prompt, const LlmConfig& config) {
  JobOutcome out;
  for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
    out.attempts = attempt;
    try {
      out.result = generate_llm(prompt, backend, config.params);
      out.error.reset();
      return out;
    } catch (const BackendError& e) {
      out.error = e.what();
      if (!e.retryable()) return out;
      if (config.backend != "stub")
        std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
    } catch (const Error& e) {
      out.error = e.what();
      return out;
    }
  }
  return out;
}

// Bounded parallelism; outcomes keep job order.
std::vector<JobOutcome> run_jobs(const std::vector<PromptJob>& jobs, LlmBackend& backend,
                                 const LlmConfig& config) {
  std::vector<JobOutcome> out(jobs.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, config.concurrency));
  for (std::size_t start = 0; start < jobs.size(); start += width) {
    std::vector<std::future<JobOutcome>> running;
    const std::size_t end = std::min(jobs.size(), start + width);
    for (std::size_t i = start; i < end; ++i)
      running.push_back(std::async(std::launch::async, [&, i] {
        return call_backend(backend, jobs[i].prompt, config);
      }));
    for (std::size_t i = start; i < end; ++i) out[i] = running[i - start].get();
  }
  return out;
}

std::vector<std::size_t> pick_subschemas(const std::vector<Subschema>& subs, std::size_t k,
                                         const std::map<std::string, double>& weights, Rng& rng) {
  std::vector<std::size_t> all(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) all[i] = i;
  if (k == 0 || k >= subs.size()) return all;
  std::vector<double> w(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    auto it = weights.find(subs[i].id);
    w[i] = it == weights.end() ? 1.0 : it->second;
  }
  std::vector<std::size_t> chosen;
  for (std::size_t n = 0; n < k; ++n) {
    double total = 0;
    for (std::size_t i = 0; i < w.size(); ++i) total += w[i];
    double x = rng.uniform01() * total;
    std::size_t pick = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 0) continue;
      pick = i;
      if (x < w[i]) break;
      x -= w[i];
    }
    chosen.push_back(pick);
    w[pick] = 0;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::optional<ColumnFilter> filter_for(const Subschema& sub, const RegenDirectives& d) {
  ColumnFilter f;
  for (const auto& t : sub.tables) {
    auto it = d.column_filters.find(t);
    if (it != d.column_filters.end()) f[t] = it->second;
  }
  if (f.empty()) return std::nullopt;
  return f;
}

class Runner {
 public:
  explicit Runner(const PipelineConfig& config) : config_(config), out_(config.out_dir) {}

  PipelineResult run();

 private:
  void stage(const std::string& name, const std::function<void()>& body);
  void write_manifest();
  std::string fingerprint() const;
  std::string rel(const fs::path& p) const { return p.lexically_relative(out_).generic_string(); }

  std::vector<QueryRecord> generate(int batch, const RegenDirectives& d, BatchCounts& counts);
  void validate_batch(std::vector<QueryRecord>& candidates, BatchCounts& counts);
  void absorb(const std::vector<QueryRecord>& candidates);

  const PipelineConfig& config_;
  fs::path out_;
  SchemaCatalog catalog_;
  std::vector<Subschema> subschemas_;
  std::map<std::string, const Subschema*> by_id_;
  std::unique_ptr<LlmBackend> backend_;
  std::unique_ptr<Deduplicator> dedup_;
  std::vector<QueryRecord> kept_;
  std::vector<QueryRecord> corpus_;
  std::vector<int> resumed_;
  nlohmann::ordered_json manifest_;
  nlohmann::ordered_json stages_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json files_ = nlohmann::ordered_json::object();
};

void Runner::stage(const std::string& name, const std::function<void()>& body) {
  try {
    body();
    stages_.push_back({{"name", name}, {"status", "done"}});
  } catch (const std::exception& e) {
    stages_.push_back({{"name", name}, {"status", "failed"}});
    manifest_["status"] = "failed";
    const auto* qe = dynamic_cast<const Error*>(&e);
    manifest_["error"] = {{"stage", name}, {"code", qe ? qe->code() : "internal"}, {"message", e.what()}};
    write_manifest();
    throw;
  }
}

void Runner::write_manifest() {
  manifest_["stages"] = stages_;
  manifest_["files"] = files_;
  write_json(out_ / "manifest.json", manifest_);
}

std::string Runner::fingerprint() const {
  auto snapshot = to_json(config_);
  snapshot.erase("out_dir");
  snapshot.erase("execution");
  snapshot.erase("selection");
  return stable_hash(snapshot.dump());
}

std::vector<QueryRecord> Runner::generate(int batch, const RegenDirectives& d, BatchCounts& counts) {
  const std::uint64_t seed = config_.seed;
  MechConfig mech = config_.mechanical.generator;
  mech.seed = derive_seed(seed, "mechanical", static_cast<std::uint64_t>(batch));
  if (d.bias_override == "group_by") mech.p_group_by = std::max(mech.p_group_by, config_.llm.bias_weight);
  if (d.bias_override == "order_by") mech.p_order_by = std::max(mech.p_order_by, config_.llm.bias_weight);

  std::vector<QueryRecord> candidates;
  std::map<std::string, std::vector<QueryRecord>> pools;
  std::vector<QueryRecord> pool_file;
  for (const auto& sub : subschemas_) {
    double weight = 1;
    if (auto it = d.subschema_weights.find(sub.id); it != d.subschema_weights.end()) weight = it->second;
    const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(config_.mechanical.pool_size) * weight));
    try {
      auto pool = generate_mechanical(sub, catalog_, mech, n, batch);
      if (config_.mechanical.emit) candidates.insert(candidates.end(), pool.begin(), pool.end());
      pool_file.insert(pool_file.end(), pool.begin(), pool.end());
      pools[sub.id] = std::move(pool);
    } catch (const Error& e) {
      counts.failures.push_back("mechanical " + joined(sub.tables) + ": " + e.what());
    }
  }
  if (!config_.llm.enabled) return candidates;

  const auto pool_path = out_ / "batches" / ("pool-" + std::to_string(batch) + ".jsonl");
  write_records(pool_file, pool_path.string());
  files_["pools"].push_back(rel(pool_path));

  std::vector<PromptJob> jobs;
  for (const auto& configured : config_.llm.settings) {
    PromptSetting setting = configured;
    if (d.bias_override) setting.bias = clause_bias_from_string(*d.bias_override);
    const std::string label = setting.label();
    Rng rng(derive_seed(seed, "prompt-subschemas:" + label, static_cast<std::uint64_t>(batch)));
    for (auto idx : pick_subschemas(subschemas_, config_.llm.prompts_per_setting, d.subschema_weights, rng)) {
      const Subschema& sub = subschemas_[idx];
      PromptJob job;
      job.subschema = &sub;
      job.setting = setting;
      std::vector<SeedExample> examples;
      if (setting.shots > 0) {
        std::optional<std::string> tag;
        if (setting.bias != ClauseBias::kNone) tag = std::string(to_string(setting.bias));
        try {
          examples = select_seed_examples(pools[sub.id], static_cast<std::size_t>(setting.shots), tag,
                                          config_.llm.bias_weight,
                                          derive_seed(seed, "examples:" + label + ":" + sub.id,
                                                      static_cast<std::uint64_t>(batch)));
        } catch (const Error& e) {
          counts.failures.push_back("examples " + label + " " + joined(sub.tables) + ": " + e.what());
          continue;
        }
      }
      for (const auto& ex : examples) job.example_ids.push_back(ex.id);
      job.filter = filter_for(sub, d);
      job.prompt = build_prompt(sub, catalog_, setting, examples, config_.llm.texts, job.filter);
      jobs.push_back(std::move(job));
    }
  }

  const auto outcomes = run_jobs(jobs, *backend_, config_.llm);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    const auto& outcome = outcomes[i];
    counts.llm_calls += static_cast<std::uint64_t>(outcome.attempts);
    if (outcome.error) {
      ++counts.llm_failures;
      counts.failures.push_back("llm " + job.setting.label() + " " + joined(job.subschema->tables) +
                                ": " + *outcome.error);
      continue;
    }
    for (const auto& f : outcome.result.failures) counts.failures.push_back("llm completion: " + f);
    for (const auto& completion : outcome.result.completions) {
      const auto statements = extract_sql(completion);
      std::string sql = statements.empty() ? completion : statements.front();
      QueryRecord r = make_record(std::move(sql), kOriginLlm, job.subschema->id, batch);
      r.prompt_setting = job.setting;
      r.prompt_hash = stable_hash(job.prompt);
      r.model_name = backend_->model_name();
      r.generation_params = config_.llm.params;
      r.example_ids = job.example_ids;
      r.prompt_columns = job.filter;
      candidates.push_back(std::move(r));
    }
  }
  return candidates;
}

void Runner::validate_batch(std::vector<QueryRecord>& candidates, BatchCounts& counts) {
  RelevanceOptions relevance;
  relevance.require_all_subschema_tables = config_.validator.require_all_subschema_tables;
  for (auto& r : candidates) {
    auto it = by_id_.find(r.subschema_id);
    const Subschema* sub = it == by_id_.end() ? nullptr : it->second;
    auto report = validate_query(r.sql, catalog_, sub, relevance);
    if (report.accepted()) {
      if (!dedup_->insert(r.sql)) {
        report.rejection_reasons.push_back(RejectReason::kDuplicate);
        report.detail = "normalized form seen before";
      } else {
        try {
          r.profile = profile_query(r.sql, catalog_);
        } catch (const Error& e) {
          report.rejection_reasons.push_back(RejectReason::kUnknownObject);
          report.detail = e.what();
        }
      }
    }
    r.validation = std::move(report);
  }
  counts.generated = candidates.size();
}

// Updates counts-independent state (kept list, seen set) from validated
// candidates; used for both fresh and resumed batches.
void Runner::absorb(const std::vector<QueryRecord>& candidates) {
  for (const auto& r : candidates) {
    if (!r.validation || !r.validation->accepted()) continue;
    dedup_->insert(r.sql);
    kept_.push_back(r);
  }
}

BatchCounts count_batch(const std::vector<QueryRecord>& candidates, BatchCounts counts) {
  counts.generated = candidates.size();
  counts.kept = counts.deduplicated = 0;
  counts.rejected.clear();
  for (const auto& r : candidates) {
    if (!r.validation) throw FormatError("batch record " + r.id + " lacks a validation report");
    const auto& reasons = r.validation->rejection_reasons;
    if (reasons.empty())
      ++counts.kept;
    else if (reasons.back() == RejectReason::kDuplicate && reasons.size() == 1)
      ++counts.deduplicated;
    else
      ++counts.rejected[std::string(to_string(reasons.front()))];
  }
  return counts;
}

PipelineResult Runner::run() {
  config_.validate();
  fs::create_directories(out_ / "batches");
  const std::string print = fingerprint();

  auto snapshot = to_json(config_);
  snapshot.erase("out_dir");
  manifest_["schema_version"] = kJsonlSchemaVersion;
  manifest_["status"] = "running";
  manifest_["config_fingerprint"] = print;
  manifest_["config"] = snapshot;
  manifest_["seeds"] = {{"global", config_.seed}};

  stage("preprocess", [&] {
    catalog_ = prepare_catalog(config_.schema);
    save_catalog(catalog_, (out_ / "catalog.json").string());
    files_["catalog"] = "catalog.json";
    manifest_["catalog"] = {{"tables", catalog_.tables.size()},
                            {"declared_foreign_keys", catalog_.count_fks(FkProvenance::kDeclared)},
                            {"inferred_foreign_keys", catalog_.count_fks(FkProvenance::kInferred)},
                            {"advisories", catalog_.advisories}};
  });

  stage("subschemas", [&] {
    subschemas_ = prepare_subschemas(catalog_, config_.subschemas);
    if (subschemas_.empty()) throw EmptyInputError("no subschemas within the configured bounds");
    for (const auto& s : subschemas_) by_id_[s.id] = &s;
    write_subschemas(subschemas_, (out_ / "subschemas.jsonl").string());
    files_["subschemas"] = "subschemas.jsonl";
    manifest_["subschemas"] = subschemas_.size();
  });

  // Resume state: batch files are reusable only under the same fingerprint.
  const auto checkpoint_path = out_ / "checkpoint.json";
  std::map<int, BatchCounts> done;
  if (fs::exists(checkpoint_path)) {
    try {
      const auto cp = nlohmann::json::parse(read_text(checkpoint_path.string()));
      if (cp.at("config_fingerprint").get<std::string>() == print)
        for (const auto& b : cp.at("batches")) {
          auto c = batch_counts_from_json(b);
          done[c.batch] = std::move(c);
        }
    } catch (const std::exception&) {
      done.clear();
    }
  }
  auto save_checkpoint = [&] {
    nlohmann::ordered_json cp;
    cp["config_fingerprint"] = print;
    cp["batches"] = nlohmann::ordered_json::array();
    for (const auto& [b, c] : done) cp["batches"].push_back(to_json(c));
    write_json(checkpoint_path, cp);
  };

  dedup_ = std::make_unique<Deduplicator>(config_.validator.literal_placeholders);
  if (config_.llm.enabled) stage("backend", [&] { backend_ = make_backend(config_.llm); });

  nlohmann::ordered_json batches = nlohmann::ordered_json::array();
  BatchCounts totals;
  totals.batch = -1;
  stage("generate", [&] {
    RegenDirectives directives;
    files_["batches"] = nlohmann::ordered_json::array();
    for (int b = 0; b <= config_.loop.limit; ++b) {
      const auto batch_path = out_ / "batches" / ("batch-" + std::to_string(b) + ".jsonl");
      std::vector<QueryRecord> candidates;
      BatchCounts counts;
      counts.batch = b;
      bool resumed = false;
      if (auto it = done.find(b); it != done.end() && fs::exists(batch_path)) {
        try {
          candidates = read_records(batch_path.string());
          counts = count_batch(candidates, it->second);
          resumed = true;
          if (config_.llm.enabled) {
            const auto pool_path = out_ / "batches" / ("pool-" + std::to_string(b) + ".jsonl");
            if (fs::exists(pool_path)) files_["pools"].push_back(rel(pool_path));
          }
        } catch (const Error&) {
          candidates.clear();
        }
      }
      if (!resumed) {
        // Later batches depend on this one; drop stale checkpoints.
        for (auto it = done.lower_bound(b); it != done.end();) it = done.erase(it);
        candidates = generate(b, directives, counts);
        validate_batch(candidates, counts);
        counts = count_batch(candidates, counts);
        write_records(candidates, batch_path.string());
        done[b] = counts;
        save_checkpoint();
      }
      absorb(candidates);
      files_["batches"].push_back(rel(batch_path));

      totals.generated += counts.generated;
      totals.kept += counts.kept;
      totals.deduplicated += counts.deduplicated;
      for (const auto& [reason, n] : counts.rejected) totals.rejected[reason] += n;
      totals.llm_calls += counts.llm_calls;
      totals.llm_failures += counts.llm_failures;

      auto entry = to_json(counts);
      if (resumed) resumed_.push_back(b);
      entry["mechanical_seed"] = derive_seed(config_.seed, "mechanical", static_cast<std::uint64_t>(b));
      entry["directives"] = directives.empty() ? nlohmann::ordered_json(nullptr) : to_json(directives);

      std::string stop;
      if (kept_.empty()) {
        entry["gaps"] = nullptr;
        if (b == config_.loop.limit) stop = "loop_limit";
      } else {
        std::vector<ComplexityProfile> profiles;
        for (const auto& r : kept_) profiles.push_back(*r.profile);
        const auto report = aggregate_coverage(profiles, "all", catalog_, config_.coverage);
        entry["gaps"] = report.gaps.size();
        if (b == config_.loop.limit) stop = "loop_limit";
        else if (report.gaps.empty()) stop = "no_gaps";
        else if (config_.loop.kept_target && kept_.size() >= config_.loop.kept_target) stop = "kept_target";
        else directives = plan_regeneration(report, subschemas_, catalog_);
      }
      if (!stop.empty()) entry["stop_reason"] = stop;
      batches.push_back(entry);
      if (!stop.empty()) break;
    }
    manifest_["batches"] = batches;
    auto t = to_json(totals);
    t.erase("batch");
    t.erase("failures");
    manifest_["totals"] = t;
  });

  stage("select", [&] {
    corpus_ = select_records(kept_, config_.selection);
    write_records(corpus_, (out_ / "corpus.jsonl").string());
    files_["corpus"] = "corpus.jsonl";
    std::map<std::string, std::uint64_t> per_group;
    for (const auto& r : corpus_) ++per_group[group_of(r)];
    manifest_["selection"] = {{"strategy", config_.selection.strategy},
                              {"size", config_.selection.size},
                              {"selected", corpus_.size()},
                              {"per_group", per_group}};
  });

  stage("coverage", [&] {
    std::vector<CoverageReport> reports;
    std::vector<std::string> order;
    std::map<std::string, std::vector<ComplexityProfile>> groups;
    std::vector<ComplexityProfile> all;
    for (const auto& r : corpus_) {
      const auto g = group_of(r);
      if (!groups.count(g)) order.push_back(g);
      groups[g].push_back(*r.profile);
      all.push_back(*r.profile);
    }
    if (all.empty()) {
      manifest_["coverage"] = nullptr;
      return;
    }
    reports.push_back(aggregate_coverage(all, "all", catalog_, config_.coverage));
    for (const auto& g : order) reports.push_back(aggregate_coverage(groups[g], g, catalog_, config_.coverage));
    nlohmann::ordered_json doc;
    doc["schema_version"] = kJsonlSchemaVersion;
    doc["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) doc["reports"].push_back(to_json(r));
    write_json(out_ / "coverage.json", doc);
    write_text(out_ / "coverage_facets.csv", facets_csv(reports));
    write_text(out_ / "coverage_clauses.csv", clause_presence_csv(reports));
    files_["coverage"] = "coverage.json";
    files_["coverage_facets"] = "coverage_facets.csv";
    files_["coverage_clauses"] = "coverage_clauses.csv";
    manifest_["coverage"] = {{"gaps", reports.front().gaps.size()}};
  });

  if (config_.execution.enabled) {
    stage("execute", [&] {
      auto labels = execute_engines(corpus_, config_.execution.engines, catalog_,
                                    config_.execution.timeout_ms);
      std::vector<RuntimeLabel> flat;
      for (const auto& [engine, list] : labels) flat.insert(flat.end(), list.begin(), list.end());
      const auto retention = apply_retention(flat, config_.execution.min_empty_runtime_ms);
      std::set<std::string> dropped;
      std::map<std::string, std::uint64_t> dropped_by_reason;
      for (const auto& [label, reason] : retention.dropped) {
        dropped.insert(label.query_id);
        ++dropped_by_reason[reason];
      }
      std::map<std::string, std::vector<const RuntimeLabel*>> by_query;
      for (const auto& l : flat) by_query[l.query_id].push_back(&l);
      std::vector<QueryRecord> labeled;
      for (auto r : corpus_) {
        if (dropped.count(r.id)) continue;
        for (const auto* l : by_query[r.id]) r.labels[l->engine_id] = *l;
        labeled.push_back(std::move(r));
      }
      write_records(labeled, (out_ / "labeled.jsonl").string());
      files_["labeled"] = "labeled.jsonl";
      std::vector<std::string> engines;
      for (const auto& e : config_.execution.engines) engines.push_back(e.engine_id);
      manifest_["execution"] = {{"engines", engines},
                                {"executed", corpus_.size()},
                                {"retained", labeled.size()},
                                {"dropped_labels", dropped_by_reason}};
    });
  }

  manifest_["status"] = "ok";
  manifest_.erase("error");
  write_manifest();
  return {manifest_, corpus_, resumed_};
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  Runner runner(config);
  return runner.run();
}

}  // namespace querygen
