#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nprank/corpus.hpp"
#include "nprank/error.hpp"

namespace nprank {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const noexcept { return values.size(); }
  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

// A backend maps text to fixed-dimension vectors. Implementations must be
// safe to call from several threads at once and deterministic per instance.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  // One vector per input, in order.
  virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const = 0;
};

// ---------------------------------------------------------------------------
// Cosine similarity

// dot(a,b) / (|a| |b|), 0 if either norm is 0, clamped to [-1, 1].
inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ContractError("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) { return cosine(a.values, b.values); }

// ---------------------------------------------------------------------------
// Hash embedding
//
// Deterministic, model-free stand-in for a sentence encoder:
//   1. lowercase ASCII letters, split on ASCII whitespace;
//   2. per token, key = FNV-1a-64 over the token bytes followed by the eight
//      little-endian bytes of the seed;
//   3. a SplitMix64 generator started at key yields dim draws, each mapped
//      to (x >> 11) * 2^-53 * 2 - 1, i.e. uniform on [-1, 1);
//   4. token vectors are summed componentwise in token order, starting from
//      the zero vector.
// Every step is exact IEEE double arithmetic except the final sums, which
// are performed in a fixed order, so results are bit-identical across
// conforming platforms (built with -ffp-contract=off).

namespace hashing {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t token_key(std::string_view token, std::uint64_t seed) {
  std::uint64_t h = fnv1a(token);
  for (int i = 0; i < 8; ++i) {
    h ^= (seed >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
  return h;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double next_symmetric_unit() {
    constexpr double kTwoPowMinus53 = 1.0 / 9007199254740992.0;
    return static_cast<double>(next() >> 11) * kTwoPowMinus53 * 2.0 - 1.0;
  }

 private:
  std::uint64_t state_;
};

}  // namespace hashing

inline EmbeddingVector hash_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
  EmbeddingVector v{std::vector<double>(dim, 0.0)};
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(), detail::ascii_lower);
  for (auto tok : detail::split_ws(lowered)) {
    hashing::SplitMix64 rng(hashing::token_key(tok, seed));
    for (std::size_t i = 0; i < dim; ++i) v.values[i] += rng.next_symmetric_unit();
  }
  return v;
}

class HashBackend final : public EmbeddingBackend {
 public:
  HashBackend(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
    if (dim == 0) throw ConfigError("hash backend: dim must be >= 1");
  }

  std::string name() const override { return "hash"; }
  std::size_t dim() const override { return dim_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(hash_embed(t, dim_, seed_));
    return out;
  }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// ---------------------------------------------------------------------------
// Cache and batched embedding

// Keyed on exact text bytes. Readers share the lock; a racing duplicate
// insert is harmless because backends are deterministic.
class EmbeddingCache {
 public:
  std::shared_ptr<const EmbeddingVector> find(const std::string& text) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(text);
    return it == entries_.end() ? nullptr : it->second;
  }

  void insert(const std::string& text, EmbeddingVector v) {
    auto ptr = std::make_shared<const EmbeddingVector>(std::move(v));
    std::unique_lock lock(mutex_);
    entries_.try_emplace(text, std::move(ptr));
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const EmbeddingVector>> entries_;
};

// Embeds texts in order. Duplicates within the call and strings already in
// the cache are not sent to the backend; the remaining distinct strings go
// out in a single embed_batch call. Every returned vector is checked against
// the backend's declared dim.
inline std::vector<EmbeddingVector> embed_texts(const EmbeddingBackend& backend, std::span<const std::string> texts,
                                                EmbeddingCache* cache = nullptr) {
  std::vector<EmbeddingVector> out(texts.size());
  std::unordered_map<std::string_view, std::vector<std::size_t>> pending;
  std::vector<std::string> misses;

  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (cache) {
      if (auto hit = cache->find(texts[i])) {
        out[i] = *hit;
        continue;
      }
    }
    auto [it, fresh] = pending.try_emplace(texts[i]);
    if (fresh) misses.push_back(texts[i]);
    it->second.push_back(i);
  }
  if (misses.empty()) return out;

  auto vectors = backend.embed_batch(misses);
  if (vectors.size() != misses.size())
    throw ContractError(backend.name() + " backend returned " + std::to_string(vectors.size()) + " vectors for " +
                        std::to_string(misses.size()) + " texts");
  for (std::size_t k = 0; k < misses.size(); ++k) {
    auto& v = vectors[k];
    if (v.dim() != backend.dim())
      throw ContractError(backend.name() + " backend returned a vector of dim " + std::to_string(v.dim()) +
                          ", declared " + std::to_string(backend.dim()));
    if (!v.all_finite()) throw ContractError(backend.name() + " backend returned a non-finite value");
    for (std::size_t i : pending[misses[k]]) out[i] = v;
    if (cache) cache->insert(misses[k], std::move(v));
  }
  return out;
}

}  // namespace nprank
