#pragma once

// Batch pipeline: extract -> rank -> evaluate, with file outputs at every
// stage, plus configuration handling and the sidecar contract probe.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>
#include <vector>

#include "json.hpp"
#include "nprank/chunker.hpp"
#include "nprank/corpus.hpp"
#include "nprank/embeddings.hpp"
#include "nprank/error.hpp"
#include "nprank/eval.hpp"
#include "nprank/http_backend.hpp"
#include "nprank/ranker.hpp"

namespace nprank {

enum class ExitCode : int {
  Ok = 0,
  Internal = 1,
  Config = 2,  // bad flags, config file or values
  Parse = 3,   // malformed CoNLL-U, dataset or prediction file
  Backend = 4, // sidecar unreachable or contract violation
  Data = 5,    // duplicate/unknown ids, nothing to score
  Io = 6,      // files cannot be read or written
};

inline ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return ExitCode::Config;
  if (dynamic_cast<const ParseError*>(&e)) return ExitCode::Parse;
  if (dynamic_cast<const BackendError*>(&e)) return ExitCode::Backend;
  if (dynamic_cast<const DataError*>(&e)) return ExitCode::Data;
  if (dynamic_cast<const IoError*>(&e)) return ExitCode::Io;
  return ExitCode::Internal;
}

// ---------------------------------------------------------------------------
// Configuration

enum class BackendKind { Hash, Http };

struct PipelineConfig {
  BackendKind backend = BackendKind::Hash;
  std::size_t hash_dim = 64;
  std::uint64_t hash_seed = 42;
  std::string http_url = "http://127.0.0.1:8765";
  std::size_t http_batch_size = 32;
  int http_retries = 3;
  bool stem = false;
  std::vector<int> cutoffs{5, 10, 15};
  std::size_t workers = 1;

  void validate() const {
    if (hash_dim == 0) throw ConfigError("hash.dim must be >= 1");
    if (http_batch_size == 0) throw ConfigError("http.batch_size must be >= 1");
    if (http_retries < 1) throw ConfigError("http.retries must be >= 1");
    if (workers == 0) throw ConfigError("workers must be >= 1");
    validate_cutoffs(cutoffs);
  }
};

// A partial configuration; set fields override lower layers.
struct ConfigLayer {
  std::optional<BackendKind> backend;
  std::optional<std::size_t> hash_dim;
  std::optional<std::uint64_t> hash_seed;
  std::optional<std::string> http_url;
  std::optional<std::size_t> http_batch_size;
  std::optional<int> http_retries;
  std::optional<bool> stem;
  std::optional<std::vector<int>> cutoffs;
  std::optional<std::size_t> workers;

  void apply_to(PipelineConfig& c) const {
    if (backend) c.backend = *backend;
    if (hash_dim) c.hash_dim = *hash_dim;
    if (hash_seed) c.hash_seed = *hash_seed;
    if (http_url) c.http_url = *http_url;
    if (http_batch_size) c.http_batch_size = *http_batch_size;
    if (http_retries) c.http_retries = *http_retries;
    if (stem) c.stem = *stem;
    if (cutoffs) c.cutoffs = *cutoffs;
    if (workers) c.workers = *workers;
  }
};

inline constexpr const char* kSidecarUrlEnv = "NPRANK_SIDECAR_URL";

namespace detail {

inline std::string trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || out > std::numeric_limits<T>::max())
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return static_cast<T>(out);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

}  // namespace detail

inline BackendKind parse_backend_kind(const std::string& v) {
  if (v == "hash") return BackendKind::Hash;
  if (v == "http") return BackendKind::Http;
  throw ConfigError("backend must be 'hash' or 'http', got '" + v + "'");
}

inline std::vector<int> parse_cutoffs(const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    out.push_back(static_cast<int>(detail::parse_unsigned<std::uint32_t>("cutoffs", item)));
  }
  validate_cutoffs(out);
  return out;
}

// Flat "key = value" text; '#' starts a comment line.
inline ConfigLayer parse_config_text(std::string_view text) {
  ConfigLayer layer;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = detail::trim(std::string_view(line).substr(0, eq));
    const auto value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key == "backend") layer.backend = parse_backend_kind(value);
    else if (key == "hash.dim") layer.hash_dim = detail::parse_unsigned<std::size_t>(key, value);
    else if (key == "hash.seed") layer.hash_seed = detail::parse_unsigned<std::uint64_t>(key, value);
    else if (key == "http.url") layer.http_url = value;
    else if (key == "http.batch_size") layer.http_batch_size = detail::parse_unsigned<std::size_t>(key, value);
    else if (key == "http.retries") layer.http_retries = static_cast<int>(detail::parse_unsigned<std::uint16_t>(key, value));
    else if (key == "stem") layer.stem = detail::parse_bool(key, value);
    else if (key == "cutoffs") layer.cutoffs = parse_cutoffs(value);
    else if (key == "workers") layer.workers = detail::parse_unsigned<std::size_t>(key, value);
    else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return layer;
}

inline ConfigLayer load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

inline ConfigLayer env_layer() {
  ConfigLayer layer;
  if (const char* url = std::getenv(kSidecarUrlEnv); url && *url) layer.http_url = url;
  return layer;
}

// defaults < config file < environment < command line
inline PipelineConfig resolve_config(const ConfigLayer& file, const ConfigLayer& env, const ConfigLayer& cli) {
  PipelineConfig c;
  file.apply_to(c);
  env.apply_to(c);
  cli.apply_to(c);
  c.validate();
  return c;
}

inline std::unique_ptr<EmbeddingBackend> make_backend(const PipelineConfig& c) {
  if (c.backend == BackendKind::Hash) return std::make_unique<HashBackend>(c.hash_dim, c.hash_seed);
  HttpBackendOptions opts;
  opts.url = c.http_url;
  opts.batch_size = c.http_batch_size;
  opts.attempts = c.http_retries;
  return std::make_unique<HttpBackend>(opts);
}

// ---------------------------------------------------------------------------
// Plumbing

// Runs fn(i) for i in [0, count) on up to `workers` threads. If any call
// throws, the exception from the lowest index is rethrown.
inline void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Writes to a sibling temp file and renames over the target.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

inline std::vector<const Document*> sorted_by_id(const std::vector<Document>& docs) {
  std::vector<const Document*> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(&d);
  std::sort(out.begin(), out.end(), [](const Document* a, const Document* b) { return a->id < b->id; });
  return out;
}

// ---------------------------------------------------------------------------
// Stages

inline constexpr int kCandidateFormatVersion = 1;

// Header record followed by one record per document (ordered by id) listing
// every candidate span in sentence order.
inline std::string extract_candidates_file(const std::vector<Document>& docs, bool stem, std::size_t workers = 1) {
  const auto order = sorted_by_id(docs);
  std::vector<std::string> lines(order.size());
  parallel_for(order.size(), workers, [&](std::size_t i) {
    const auto& doc = *order[i];
    nlohmann::ordered_json rec;
    rec["doc_id"] = doc.id;
    auto& cands = rec["candidates"] = nlohmann::ordered_json::array();
    for (const auto& s : doc.sentences) {
      for (const auto& c : extract_candidates(s, stem)) {
        cands.push_back({{"sentence", c.sentence_ordinal},
                         {"start", c.start},
                         {"end", c.end},
                         {"surface", c.surface},
                         {"normalized", c.normalized}});
      }
    }
    lines[i] = rec.dump() + "\n";
  });
  nlohmann::ordered_json header;
  header["format"] = "nprank-candidates";
  header["version"] = kCandidateFormatVersion;
  header["stem"] = stem;
  header["documents"] = docs.size();
  std::string out = header.dump() + "\n";
  for (const auto& l : lines) out += l;
  return out;
}

inline std::vector<RankedKeyphrases> rank_dataset(const std::vector<Document>& docs, const EmbeddingBackend& backend,
                                                  bool stem, std::size_t workers = 1) {
  const auto order = sorted_by_id(docs);
  std::vector<RankedKeyphrases> out(order.size());
  EmbeddingCache cache;
  parallel_for(order.size(), workers, [&](std::size_t i) {
    out[i] = score_document(*order[i], backend, RankOptions{stem, &cache});
  });
  return out;
}

inline std::string predictions_file(const std::vector<RankedKeyphrases>& ranked) {
  std::ostringstream out;
  write_predictions(out, ranked);
  return out.str();
}

inline std::vector<Prediction> load_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open predictions '" + path + "'");
  try {
    return read_predictions(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path);
  }
}

inline std::string dataset_name_from_path(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// ---------------------------------------------------------------------------
// Sidecar contract probe

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline std::vector<std::string> probe_texts(std::size_t k) {
  static const char* const kWords[] = {"keyphrase", "extraction", "noun", "phrase", "dependency", "tree",
                                       "sentence",  "embedding",  "cosine", "rank", "document", "model"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) {
    std::string t;
    for (std::size_t w = 0; w <= i % 9; ++w) {
      if (!t.empty()) t += ' ';
      t += kWords[(i * 7 + w * 5) % 12];
    }
    out.push_back(std::move(t));
  }
  return out;
}

// Verifies: /health is ready with a positive dim; a k-text batch returns k
// vectors of that dim; repeating the request reproduces the vectors; two
// identical texts in one request get identical vectors. Stops at the first
// step that cannot run.
inline std::vector<CheckResult> run_embed_check(const HttpBackendOptions& opts, std::size_t k = 32) {
  std::vector<CheckResult> results;
  std::optional<HttpBackend> client;
  try {
    client.emplace(opts);
    const auto health = client->fetch_health();
    results.push_back({"health", health.status == "ready" && health.dim > 0,
                       "model=" + health.model + " dim=" + std::to_string(health.dim) + " status=" + health.status});

    const auto texts = probe_texts(k);
    const auto first = client->embed_request(texts);
    bool shape_ok = first.vectors.size() == k && first.dim == health.dim;
    for (const auto& v : first.vectors) shape_ok = shape_ok && v.dim() == health.dim && v.all_finite();
    results.push_back({"batch-shape", shape_ok,
                       std::to_string(first.vectors.size()) + " vector(s) for " + std::to_string(k) +
                           " text(s), dim " + std::to_string(first.dim)});

    const auto second = client->embed_request(texts);
    bool same = second.vectors.size() == first.vectors.size();
    for (std::size_t i = 0; same && i < first.vectors.size(); ++i) same = first.vectors[i] == second.vectors[i];
    results.push_back({"repeat-determinism", same, same ? "identical" : "vectors differ between identical requests"});

    const std::vector<std::string> dup{"x", "x"};
    const auto pair = client->embed_request(dup);
    const bool dup_ok = pair.vectors.size() == 2 && pair.vectors[0] == pair.vectors[1];
    results.push_back({"duplicate-texts", dup_ok, dup_ok ? "identical" : "duplicate texts got different vectors"});
  } catch (const Error& e) {
    const char* step = !client ? "health" : results.size() == 1 ? "batch-shape"
                                          : results.size() == 2 ? "repeat-determinism"
                                                                : "duplicate-texts";
    results.push_back({step, false, e.what()});
  }
  return results;
}

}  // namespace nprank
