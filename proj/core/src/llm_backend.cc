#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "querygen/error.h"
#include "querygen/hash.h"
#include "querygen/http_client.h"
#include "querygen/llm.h"

namespace querygen {

StubBackend::StubBackend(std::string directory, std::string model)
    : directory_(std::move(directory)), model_(std::move(model)) {}

const std::vector<std::string>* StubBackend::load(const std::string& file) {
  auto it = cache_.find(file);
  if (it == cache_.end()) {
    std::optional<std::vector<std::string>> entry;
    const auto path = std::filesystem::path(directory_) / file;
    std::ifstream in(path);
    if (in) {
      try {
        const auto doc = nlohmann::json::parse(in);
        const auto& list = doc.is_array() ? doc : doc.at("completions");
        entry = list.get<std::vector<std::string>>();
      } catch (const nlohmann::json::exception& e) {
        throw BackendError("stub file '" + path.string() + "' is malformed: " + e.what(), 0, false);
      }
    }
    it = cache_.emplace(file, std::move(entry)).first;
  }
  return it->second ? &*it->second : nullptr;
}

GenerationResult StubBackend::generate(const std::string& prompt, const GenParams& params) {
  std::lock_guard<std::mutex> lock(mutex_);
  const std::uint64_t h = fnv1a64(prompt);
  GenerationResult result;
  const auto want = static_cast<std::size_t>(std::max(params.n_completions, 0));
  if (const auto* exact = load(hex64(h) + ".json")) {
    for (std::size_t i = 0; i < exact->size() && i < want; ++i) result.completions.push_back((*exact)[i]);
  } else if (const auto* fallback = load("default.json")) {
    if (fallback->empty()) throw BackendError("stub default.json is empty", 0, false);
    const std::size_t offset = static_cast<std::size_t>(h % fallback->size());
    for (std::size_t i = 0; i < want; ++i)
      result.completions.push_back((*fallback)[(offset + i) % fallback->size()]);
  } else {
    throw BackendError("no stub completions for prompt " + hex64(h) + " in " + directory_, 404, false);
  }
  for (std::size_t i = result.completions.size(); i < want; ++i)
    result.failures.push_back("stub has no completion #" + std::to_string(i + 1));
  return result;
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  if (config_.style != "completions" && config_.style != "chat")
    throw ConfigError("backend style must be 'completions' or 'chat'");
  parse_url(config_.url);
}

GenerationResult HttpBackend::generate(const std::string& prompt, const GenParams& params) {
  nlohmann::ordered_json body;
  body["model"] = config_.model;
  if (config_.style == "chat")
    body["messages"] = nlohmann::ordered_json::array({{{"role", "user"}, {"content", prompt}}});
  else
    body["prompt"] = prompt;
  body["temperature"] = params.temperature;
  body["top_p"] = params.top_p;
  body["repetition_penalty"] = params.repetition_penalty;
  body["n"] = params.n_completions;
  body["max_tokens"] = params.max_tokens;

  Headers headers;
  if (!config_.api_key_env.empty())
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
      headers["Authorization"] = std::string("Bearer ") + key;

  HttpResponse resp;
  try {
    resp = http_post(config_.url, body.dump(), "application/json", headers, config_.timeout_ms);
  } catch (const ConnectionError& e) {
    throw BackendError(e.what(), 0, true);
  }
  if (resp.status != 200) {
    const bool retryable = resp.status == 429 || resp.status >= 500;
    throw BackendError("backend returned HTTP " + std::to_string(resp.status), resp.status, retryable);
  }

  GenerationResult result;
  try {
    const auto doc = nlohmann::json::parse(resp.body);
    for (const auto& choice : doc.at("choices")) {
      if (choice.contains("message"))
        result.completions.push_back(choice.at("message").at("content").get<std::string>());
      else
        result.completions.push_back(choice.at("text").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("malformed backend response: ") + e.what(), resp.status, false);
  }
  for (auto i = result.completions.size(); i < static_cast<std::size_t>(params.n_completions); ++i)
    result.failures.push_back("backend returned no completion #" + std::to_string(i + 1));
  return result;
}

GenerationResult generate_llm(const std::string& prompt, LlmBackend& backend,
                              const GenParams& params) {
  params.validate();
  auto result = backend.generate(prompt, params);
  const auto n = static_cast<std::size_t>(params.n_completions);
  if (result.completions.size() > n) result.completions.resize(n);
  if (result.completions.empty() && result.failures.empty())
    result.failures.push_back("backend returned no completions");
  return result;
}

}  // namespace querygen
