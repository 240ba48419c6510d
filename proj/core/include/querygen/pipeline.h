#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "querygen/catalog.h"
#include "querygen/config.h"
#include "querygen/llm.h"
#include "querygen/record.h"
#include "querygen/subschema.h"

namespace querygen {

// Ingest, optional FK inference, optional profiling. Throws the module errors.
SchemaCatalog prepare_catalog(const SchemaConfig& config);

// Enumerates subschemas on the configured edge set and applies `include`.
std::vector<Subschema> prepare_subschemas(const SchemaCatalog& catalog,
                                          const SubschemaConfig& config);

std::unique_ptr<LlmBackend> make_backend(const LlmConfig& config);

// Per-batch bookkeeping. generated = kept + deduplicated + sum(rejected).
struct BatchCounts {
  int batch = 0;
  std::uint64_t generated = 0;
  std::uint64_t kept = 0;
  std::uint64_t deduplicated = 0;
  std::map<std::string, std::uint64_t> rejected;  // by first reason
  std::uint64_t llm_calls = 0;
  std::uint64_t llm_failures = 0;
  std::vector<std::string> failures;  // per-item problems, never fatal

  std::uint64_t rejected_total() const;
};

nlohmann::ordered_json to_json(const BatchCounts& c);

// Keeps records in order; first_n takes a prefix, stratified round-robins
// over groups (prompt setting label, or "mechanical") in first-seen order.
std::vector<QueryRecord> select_records(const std::vector<QueryRecord>& kept,
                                        const SelectionConfig& selection);

struct PipelineResult {
  nlohmann::ordered_json manifest;
  std::vector<QueryRecord> corpus;  // selected kept records
  std::vector<int> resumed_batches;  // reused from checkpoints
};

// Writes into config.out_dir:
//   catalog.json, subschemas.jsonl, batches/batch-<b>.jsonl (every candidate
//   with its validation), corpus.jsonl, coverage.json, coverage_facets.csv,
//   coverage_clauses.csv, labeled.jsonl (with execution), manifest.json.
// Batch files are reused on rerun when checkpoint.json carries the same
// config fingerprint. Stage-fatal errors rethrow after the manifest is
// written with status "failed".
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace querygen
