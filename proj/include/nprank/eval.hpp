#pragma once

// Precision / recall / F1 at cutoffs, macro-averaged over documents.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "nprank/corpus.hpp"
#include "nprank/error.hpp"
#include "nprank/ranker.hpp"

namespace nprank {

struct DocScore {
  std::string doc_id;
  int n = 0;
  int matched = 0;
  int retrieved = 0;  // min(n, available predictions)
  int gold_size = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MacroScores {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::string dataset;
  bool stem = false;
  std::vector<int> cutoffs;
  std::map<int, MacroScores> per_n;
  int doc_count = 0;
  std::vector<std::string> excluded;  // documents without gold
  std::vector<DocScore> per_doc;      // ordered by doc id, then cutoff
};

// Scores one ranked prediction list at cutoff n. Returns nullopt when gold
// is empty: recall is undefined and the caller skips the document.
inline std::optional<DocScore> score_doc(std::span<const std::string> predicted, const std::set<std::string>& gold,
                                         int n, std::string doc_id = {}) {
  if (gold.empty()) return std::nullopt;
  DocScore s;
  s.doc_id = std::move(doc_id);
  s.n = n;
  s.retrieved = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 0)), predicted.size()));
  s.gold_size = static_cast<int>(gold.size());
  std::set<std::string_view> counted;
  for (int i = 0; i < s.retrieved; ++i) {
    const auto& p = predicted[static_cast<std::size_t>(i)];
    if (gold.count(p) && counted.insert(p).second) ++s.matched;
  }
  s.precision = s.retrieved == 0 ? 0.0 : static_cast<double>(s.matched) / s.retrieved;
  s.recall = static_cast<double>(s.matched) / s.gold_size;
  s.f1 = (s.precision + s.recall) == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

inline void validate_cutoffs(const std::vector<int>& cutoffs) {
  if (cutoffs.empty()) throw ConfigError("cutoffs must be non-empty");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] < 1) throw ConfigError("cutoffs must be >= 1");
    if (i > 0 && cutoffs[i] <= cutoffs[i - 1]) throw ConfigError("cutoffs must be strictly increasing");
  }
}

// Both sides are re-normalized with the same stem setting. Dataset documents
// without a prediction record are scored with an empty prediction list.
inline EvalReport evaluate(const std::vector<Prediction>& predictions, const std::vector<Document>& dataset,
                           const std::vector<int>& cutoffs, bool stem, std::string dataset_name = "dataset") {
  validate_cutoffs(cutoffs);

  std::map<std::string, const Document*> docs;
  for (const auto& d : dataset) docs.emplace(d.id, &d);

  std::map<std::string, const Prediction*> by_id;
  std::vector<std::string> unknown, duplicate;
  for (const auto& p : predictions) {
    if (!docs.count(p.doc_id)) unknown.push_back(p.doc_id);
    if (!by_id.emplace(p.doc_id, &p).second) duplicate.push_back(p.doc_id);
  }
  auto join = [](const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) s += (s.empty() ? "" : ", ") + id;
    return s;
  };
  if (!unknown.empty()) throw DataError("predictions reference unknown document id(s): " + join(unknown));
  if (!duplicate.empty()) throw DataError("predictions repeat document id(s): " + join(duplicate));

  EvalReport report;
  report.dataset = std::move(dataset_name);
  report.stem = stem;
  report.cutoffs = cutoffs;

  std::map<int, MacroScores> sums;
  for (const auto& [id, doc] : docs) {
    std::set<std::string> gold;
    if (doc->gold)
      for (const auto& g : *doc->gold) {
        auto norm = normalize_phrase(g, stem);
        if (!norm.empty()) gold.insert(std::move(norm));
      }
    if (gold.empty()) {
      report.excluded.push_back(id);
      continue;
    }

    std::vector<std::string> predicted;
    if (auto it = by_id.find(id); it != by_id.end()) {
      std::unordered_set<std::string> seen;
      for (const auto& k : it->second->keyphrases) {
        auto norm = normalize_phrase(k.surface.empty() ? k.normalized : k.surface, stem);
        if (!norm.empty() && seen.insert(norm).second) predicted.push_back(std::move(norm));
      }
    }

    ++report.doc_count;
    for (int n : cutoffs) {
      auto s = *score_doc(predicted, gold, n, id);
      auto& acc = sums[n];
      acc.precision += s.precision;
      acc.recall += s.recall;
      acc.f1 += s.f1;
      report.per_doc.push_back(std::move(s));
    }
  }
  if (report.doc_count == 0) throw DataError("no scoreable documents: every document lacks gold keyphrases");

  for (int n : cutoffs) {
    const auto& acc = sums[n];
    report.per_n[n] = {acc.recall / report.doc_count, acc.precision / report.doc_count, acc.f1 / report.doc_count};
  }
  return report;
}

inline std::string report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["dataset"] = r.dataset;
  j["config"] = {{"matching", r.stem ? "stemmed" : "exact"},
                 {"stem", r.stem},
                 {"averaging", "macro"},
                 {"precision_denominator", "retrieved"},
                 {"cutoffs", r.cutoffs}};
  j["doc_count"] = r.doc_count;
  j["excluded"] = r.excluded;
  auto& per_n = j["per_n"] = nlohmann::ordered_json::object();
  for (const auto& [n, m] : r.per_n) per_n[std::to_string(n)] = {{"recall", m.recall}, {"precision", m.precision}, {"f1", m.f1}};
  auto& per_doc = j["per_doc"] = nlohmann::ordered_json::array();
  for (const auto& d : r.per_doc) {
    per_doc.push_back({{"doc_id", d.doc_id},
                       {"n", d.n},
                       {"matched", d.matched},
                       {"retrieved", d.retrieved},
                       {"gold_size", d.gold_size},
                       {"recall", d.recall},
                       {"precision", d.precision},
                       {"f1", d.f1}});
  }
  return j.dump(2) + "\n";
}

// Console rendering: one row per cutoff, R / P / F1 columns.
inline std::string format_table(const EvalReport& r) {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s: %d document(s) scored, %zu excluded; %s matching, macro-averaged\n",
                r.dataset.c_str(), r.doc_count, r.excluded.size(), r.stem ? "stemmed" : "exact");
  out += buf;
  out += "  N |    R     P    F1\n";
  out += "----+-----------------\n";
  for (const auto& [n, m] : r.per_n) {
    std::snprintf(buf, sizeof buf, "%3d | %.2f  %.2f  %.2f\n", n, m.recall, m.precision, m.f1);
    out += buf;
  }
  return out;
}

}  // namespace nprank
