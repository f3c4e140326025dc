#pragma once

// Informativeness ranking: every candidate occurrence in sentence j of
// document d scores cos(candidate, sentence_j) * cos(sentence_j, d).
// Occurrences sharing a normalized form merge to their best score, and the
// result is ordered by score descending, then earliest best sentence, then
// normalized form.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "nprank/chunker.hpp"
#include "nprank/corpus.hpp"
#include "nprank/embeddings.hpp"
#include "nprank/error.hpp"

namespace nprank {

struct ScoredCandidate {
  std::string normalized;
  std::string surface;
  double score = 0.0;
  int best_sentence = 0;

  friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

struct RankedKeyphrases {
  std::string doc_id;
  std::vector<ScoredCandidate> entries;

  friend bool operator==(const RankedKeyphrases&, const RankedKeyphrases&) = default;
};

// One scored candidate occurrence before merging.
struct Occurrence {
  std::string normalized;
  std::string surface;
  int sentence = 0;
  int start = 0;
  double score = 0.0;
};

inline bool ranks_before(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.best_sentence != b.best_sentence) return a.best_sentence < b.best_sentence;
  return a.normalized < b.normalized;
}

// The result depends only on the multiset of occurrences, not their order:
// the score is the maximum (ties go to the earlier sentence), and the
// surface form is that of the first occurrence in document order.
inline RankedKeyphrases merge_occurrences(std::string doc_id, const std::vector<Occurrence>& occurrences) {
  struct Acc {
    ScoredCandidate best;
    int first_sentence;
    int first_start;
  };
  std::map<std::string, Acc> merged;
  for (const auto& o : occurrences) {
    auto [it, fresh] = merged.try_emplace(o.normalized, Acc{{o.normalized, o.surface, o.score, o.sentence}, o.sentence, o.start});
    if (fresh) continue;
    auto& acc = it->second;
    if (o.score > acc.best.score || (o.score == acc.best.score && o.sentence < acc.best.best_sentence)) {
      acc.best.score = o.score;
      acc.best.best_sentence = o.sentence;
    }
    if (o.sentence < acc.first_sentence || (o.sentence == acc.first_sentence && o.start < acc.first_start)) {
      acc.first_sentence = o.sentence;
      acc.first_start = o.start;
      acc.best.surface = o.surface;
    }
  }
  RankedKeyphrases out{std::move(doc_id), {}};
  out.entries.reserve(merged.size());
  for (auto& [_, acc] : merged) out.entries.push_back(std::move(acc.best));
  std::sort(out.entries.begin(), out.entries.end(), ranks_before);
  return out;
}

struct RankOptions {
  bool stem = false;
  EmbeddingCache* cache = nullptr;
};

// Scores every occurrence. The document text, each sentence text and each
// distinct candidate surface are embedded once, in a single backend call.
inline std::vector<Occurrence> score_occurrences(const Document& doc, const EmbeddingBackend& backend,
                                                 const RankOptions& opts = {}) {
  std::vector<std::vector<CandidateSpan>> per_sentence;
  per_sentence.reserve(doc.sentences.size());
  std::vector<std::string> texts;
  texts.push_back(doc.text);
  for (const auto& s : doc.sentences) texts.push_back(s.text);
  std::unordered_map<std::string, std::size_t> surface_slot;
  for (const auto& s : doc.sentences) {
    per_sentence.push_back(extract_candidates(s, opts.stem));
    for (const auto& c : per_sentence.back()) {
      if (surface_slot.try_emplace(c.surface, texts.size()).second) texts.push_back(c.surface);
    }
  }
  if (surface_slot.empty()) return {};

  const auto vectors = embed_texts(backend, texts, opts.cache);
  const auto& doc_vec = vectors[0];

  std::vector<Occurrence> out;
  for (std::size_t j = 0; j < doc.sentences.size(); ++j) {
    const auto& sent_vec = vectors[1 + j];
    const double sent_doc = cosine(sent_vec, doc_vec);
    for (const auto& c : per_sentence[j]) {
      const double cand_sent = cosine(vectors[surface_slot.at(c.surface)], sent_vec);
      out.push_back({c.normalized, c.surface, doc.sentences[j].ordinal, c.start, cand_sent * sent_doc});
    }
  }
  return out;
}

inline RankedKeyphrases score_document(const Document& doc, const EmbeddingBackend& backend,
                                       const RankOptions& opts = {}) {
  return merge_occurrences(doc.id, score_occurrences(doc, backend, opts));
}

inline std::vector<ScoredCandidate> top_n(const RankedKeyphrases& ranked, std::size_t n) {
  const auto k = std::min(n, ranked.entries.size());
  return {ranked.entries.begin(), ranked.entries.begin() + static_cast<std::ptrdiff_t>(k)};
}

// ---------------------------------------------------------------------------
// Prediction file: JSON Lines,
//   {"doc_id": str, "keyphrases": [{"surface": str, "normalized": str, "score": num}, ...]}

struct PredictedPhrase {
  std::string surface;
  std::string normalized;
  double score = 0.0;
};

struct Prediction {
  std::string doc_id;
  std::vector<PredictedPhrase> keyphrases;
};

inline std::string prediction_line(const RankedKeyphrases& r) {
  nlohmann::ordered_json rec;
  rec["doc_id"] = r.doc_id;
  rec["keyphrases"] = nlohmann::ordered_json::array();
  for (const auto& e : r.entries) {
    nlohmann::ordered_json k;
    k["surface"] = e.surface;
    k["normalized"] = e.normalized;
    k["score"] = e.score;
    rec["keyphrases"].push_back(std::move(k));
  }
  return rec.dump() + "\n";
}

inline void write_predictions(std::ostream& out, const std::vector<RankedKeyphrases>& ranked) {
  for (const auto& r : ranked) out << prediction_line(r);
}

// Accepts records whose keyphrases carry at least one of surface/normalized.
inline std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line)) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!rec.is_object() || !rec.contains("doc_id") || !rec["doc_id"].is_string())
      throw ParseError("prediction record needs a string \"doc_id\"", lineno);
    Prediction p{rec["doc_id"].get<std::string>(), {}};
    const auto kp = rec.find("keyphrases");
    if (kp == rec.end() || !kp->is_array()) throw ParseError("prediction record needs a \"keyphrases\" list", lineno);
    for (const auto& k : *kp) {
      PredictedPhrase phrase;
      if (k.is_string()) {
        phrase.surface = k.get<std::string>();
      } else if (k.is_object()) {
        phrase.surface = k.value("surface", std::string());
        phrase.normalized = k.value("normalized", std::string());
        if (const auto s = k.find("score"); s != k.end() && s->is_number()) phrase.score = s->get<double>();
      } else {
        throw ParseError("keyphrase entries must be strings or objects", lineno);
      }
      if (phrase.surface.empty() && phrase.normalized.empty())
        throw ParseError("keyphrase entry has neither \"surface\" nor \"normalized\"", lineno);
      p.keyphrases.push_back(std::move(phrase));
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace nprank
