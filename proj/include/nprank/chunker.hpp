#pragma once

// Dependency-constrained noun-phrase chunking.
//
// A candidate is a contiguous span t_s..t_e where every token is NOUN, PROPN
// or ADJ, t_e is NOUN or PROPN, and every t_j with s <= j < e has head t_e.
// Only spans not strictly contained in another such span are returned.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "nprank/corpus.hpp"

namespace nprank {

struct CandidateSpan {
  int sentence_ordinal = 0;
  int start = 0;  // token index, inclusive
  int end = 0;    // token index, inclusive
  std::string surface;
  std::string normalized;

  friend bool operator==(const CandidateSpan&, const CandidateSpan&) = default;
};

inline bool is_phrase_token(Upos u) { return u == Upos::NOUN || u == Upos::PROPN || u == Upos::ADJ; }
inline bool is_nominal(Upos u) { return u == Upos::NOUN || u == Upos::PROPN; }

// Checks the four span invariants directly.
inline bool is_valid_span(const Sentence& s, int start, int end) {
  if (start < 1 || end > static_cast<int>(s.size()) || start > end) return false;
  if (!is_nominal(s.at(end).upos)) return false;
  for (int j = start; j < end; ++j) {
    const auto& t = s.at(j);
    if (!is_phrase_token(t.upos) || t.head != end) return false;
  }
  return true;
}

inline CandidateSpan make_span(const Sentence& s, int start, int end, bool stem = false) {
  CandidateSpan span{s.ordinal, start, end, {}, {}};
  for (int j = start; j <= end; ++j) {
    if (j > start) span.surface += ' ';
    span.surface += s.at(j).form;
  }
  span.normalized = normalize_phrase(span.surface, stem);
  return span;
}

// For every nominal token e the longest valid span ending at e starts at the
// leftmost index reachable through an unbroken run of phrase tokens headed
// by e. Those spans are the only containment-maximal multi-token
// candidates; a single-token span [e, e] is additionally absorbed when it
// sits inside the maximal span of its own head.
inline std::vector<CandidateSpan> extract_candidates(const Sentence& s, bool stem = false) {
  const int n = static_cast<int>(s.size());
  std::vector<int> leftmost(static_cast<std::size_t>(n) + 1, 0);
  for (int e = 1; e <= n; ++e) {
    if (!is_nominal(s.at(e).upos)) continue;
    int start = e;
    while (start > 1) {
      const auto& prev = s.at(start - 1);
      if (!is_phrase_token(prev.upos) || prev.head != e) break;
      --start;
    }
    leftmost[static_cast<std::size_t>(e)] = start;
  }

  std::vector<CandidateSpan> out;
  for (int e = 1; e <= n; ++e) {
    const int start = leftmost[static_cast<std::size_t>(e)];
    if (start == 0) continue;
    if (start == e) {
      const int h = s.at(e).head;
      if (h > e && leftmost[static_cast<std::size_t>(h)] != 0 && leftmost[static_cast<std::size_t>(h)] <= e) continue;
    }
    out.push_back(make_span(s, start, e, stem));
  }
  // Starts are pairwise distinct (a multi-token span's first token is headed
  // by its end, so no other kept span can begin there), so sorting by start
  // fully orders the result.
  std::sort(out.begin(), out.end(), [](const CandidateSpan& a, const CandidateSpan& b) { return a.start < b.start; });
  return out;
}

// Brute-force reference: every O(n^2) span is checked against the
// invariants, then strictly contained spans are removed.
inline std::vector<CandidateSpan> candidate_oracle(const Sentence& s, bool stem = false) {
  const int n = static_cast<int>(s.size());
  std::vector<std::pair<int, int>> valid;
  for (int a = 1; a <= n; ++a)
    for (int b = a; b <= n; ++b)
      if (is_valid_span(s, a, b)) valid.emplace_back(a, b);

  std::vector<CandidateSpan> out;
  for (const auto& [a, b] : valid) {
    bool contained = false;
    for (const auto& [c, d] : valid) {
      if (c <= a && b <= d && (c != a || d != b)) {
        contained = true;
        break;
      }
    }
    if (!contained) out.push_back(make_span(s, a, b, stem));
  }
  return out;
}

}  // namespace nprank
