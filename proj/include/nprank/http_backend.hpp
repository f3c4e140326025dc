#pragma once

// Client for the embedding sidecar:
//   GET  /health -> {"model": str, "dim": int, "status": "ready"}  (503 while loading)
//   POST /embed  {"texts": [...]} -> {"model": str, "dim": int, "vectors": [[...], ...]}

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "nprank/embeddings.hpp"
#include "nprank/error.hpp"

namespace nprank {

struct HttpBackendOptions {
  std::string url = "http://127.0.0.1:8765";
  std::size_t batch_size = 32;
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::seconds timeout{60};
};

struct SidecarHealth {
  std::string model;
  std::size_t dim = 0;
  std::string status;
};

struct EmbedResponse {
  std::string model;
  std::size_t dim = 0;
  std::vector<EmbeddingVector> vectors;
};

namespace detail {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing '/'
};

inline SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0)
    throw ConfigError("sidecar url must start with http:// (got '" + url + "')");
  const auto path = url.find('/', scheme_end + 3);
  SplitUrl out{url.substr(0, path), path == std::string::npos ? std::string() : url.substr(path)};
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  if (out.origin.size() <= scheme_end + 3) throw ConfigError("sidecar url has no host: '" + url + "'");
  return out;
}

inline std::size_t parse_dim(const nlohmann::json& body, const char* what) {
  const auto it = body.find("dim");
  if (it == body.end() || !it->is_number_integer() || it->get<long long>() <= 0)
    throw ContractError(std::string(what) + ": missing or non-positive \"dim\"");
  return it->get<std::size_t>();
}

}  // namespace detail

class HttpBackend final : public EmbeddingBackend {
 public:
  // Performs the /health handshake; the declared dim comes from the sidecar.
  explicit HttpBackend(HttpBackendOptions opts) : opts_(std::move(opts)), url_(detail::split_url(opts_.url)) {
    if (opts_.batch_size == 0) throw ConfigError("http backend: batch_size must be >= 1");
    if (opts_.attempts < 1) throw ConfigError("http backend: retries must be >= 1");
    const auto health = fetch_health();
    if (health.status != "ready")
      throw TransportError("sidecar at " + opts_.url + " is not ready (status '" + health.status + "')");
    model_ = health.model;
    dim_ = health.dim;
  }

  std::string name() const override { return "http"; }
  std::size_t dim() const override { return dim_; }
  const std::string& model() const noexcept { return model_; }

  SidecarHealth fetch_health() const {
    const auto res = with_retries("GET /health", [&](httplib::Client& cli) { return cli.Get(url_.prefix + "/health"); });
    nlohmann::json body = parse_body(res.body, "/health");
    SidecarHealth h;
    h.dim = detail::parse_dim(body, "/health");
    h.model = body.value("model", std::string());
    h.status = body.value("status", std::string());
    return h;
  }

  // One POST /embed for exactly these texts, no batching.
  EmbedResponse embed_request(std::span<const std::string> texts) const {
    const nlohmann::json req = {{"texts", std::vector<std::string>(texts.begin(), texts.end())}};
    const std::string payload = req.dump();
    const auto res = with_retries("POST /embed", [&](httplib::Client& cli) {
      return cli.Post(url_.prefix + "/embed", payload, "application/json");
    });
    nlohmann::json body = parse_body(res.body, "/embed");

    EmbedResponse out;
    out.dim = detail::parse_dim(body, "/embed");
    out.model = body.value("model", std::string());
    const auto vecs = body.find("vectors");
    if (vecs == body.end() || !vecs->is_array()) throw ContractError("/embed: missing \"vectors\" array");
    out.vectors.reserve(vecs->size());
    for (const auto& row : *vecs) {
      if (!row.is_array()) throw ContractError("/embed: vector is not an array");
      EmbeddingVector v;
      v.values.reserve(row.size());
      for (const auto& x : row) {
        if (!x.is_number()) throw ContractError("/embed: non-numeric vector component");
        v.values.push_back(x.get<double>());
      }
      out.vectors.push_back(std::move(v));
    }
    return out;
  }

  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (std::size_t begin = 0; begin < texts.size(); begin += opts_.batch_size) {
      const auto chunk = texts.subspan(begin, std::min(opts_.batch_size, texts.size() - begin));
      auto res = embed_request(chunk);
      if (res.vectors.size() != chunk.size())
        throw ContractError("/embed returned " + std::to_string(res.vectors.size()) + " vectors for " +
                            std::to_string(chunk.size()) + " texts");
      if (res.dim != dim_)
        throw ContractError("/embed reports dim " + std::to_string(res.dim) + ", handshake said " + std::to_string(dim_));
      for (auto& v : res.vectors) {
        if (v.dim() != dim_)
          throw ContractError("/embed returned a vector of length " + std::to_string(v.dim()) + ", expected " +
                              std::to_string(dim_));
        out.push_back(std::move(v));
      }
    }
    return out;
  }

 private:
  // Transport failures and 5xx responses are retried with exponential
  // backoff; any other non-200 status is a contract violation.
  template <typename Call>
  httplib::Response with_retries(const char* what, Call&& call) const {
    std::string last_error;
    auto backoff = opts_.initial_backoff;
    for (int attempt = 1; attempt <= opts_.attempts; ++attempt) {
      httplib::Client cli(url_.origin);
      cli.set_connection_timeout(opts_.timeout);
      cli.set_read_timeout(opts_.timeout);
      cli.set_write_timeout(opts_.timeout);
      auto res = call(cli);
      if (res) {
        if (res->status == 200) return *res;
        if (res->status < 500)
          throw ContractError(std::string(what) + " rejected with HTTP " + std::to_string(res->status) + ": " + res->body);
        last_error = "HTTP " + std::to_string(res->status);
      } else {
        last_error = httplib::to_string(res.error());
      }
      if (attempt < opts_.attempts) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
    }
    throw TransportError(std::string(what) + " to " + opts_.url + " failed after " + std::to_string(opts_.attempts) +
                         " attempt(s): " + last_error);
  }

  static nlohmann::json parse_body(const std::string& body, const char* endpoint) {
    try {
      auto j = nlohmann::json::parse(body);
      if (!j.is_object()) throw ContractError(std::string(endpoint) + ": response is not a JSON object");
      return j;
    } catch (const nlohmann::json::parse_error&) {
      throw ContractError(std::string(endpoint) + ": response is not valid JSON");
    }
  }

  HttpBackendOptions opts_;
  detail::SplitUrl url_;
  std::string model_;
  std::size_t dim_ = 0;
};

}  // namespace nprank
