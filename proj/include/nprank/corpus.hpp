#pragma once

// Dependency-annotated corpus model, CoNLL-U reader/writer, dataset loader
// and phrase normalization.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "nprank/error.hpp"
#include "nprank/porter.hpp"

namespace nprank {

// Universal POS tags, in the order of the UD v2 documentation.
enum class Upos {
  ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X
};

inline constexpr std::array<std::string_view, 17> kUposNames{
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

inline std::string_view to_string(Upos u) { return kUposNames[static_cast<std::size_t>(u)]; }

inline std::optional<Upos> parse_upos(std::string_view s) {
  for (std::size_t i = 0; i < kUposNames.size(); ++i)
    if (kUposNames[i] == s) return static_cast<Upos>(i);
  return std::nullopt;
}

struct Token {
  int index = 0;  // 1-based
  std::string form;
  Upos upos = Upos::X;
  int head = 0;  // 0 = root
  std::string deprel;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  int ordinal = 0;  // 0-based within the document
  std::vector<Token> tokens;
  std::string text;

  std::size_t size() const noexcept { return tokens.size(); }
  // Tokens are stored densely, so index i lives at tokens[i - 1].
  const Token& at(int index) const { return tokens.at(static_cast<std::size_t>(index - 1)); }

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::string id;
  std::string text;
  std::vector<Sentence> sentences;
  std::optional<std::vector<std::string>> gold;  // normalized, unique, first-seen order
};

// ---------------------------------------------------------------------------
// Normalization

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

}  // namespace detail

// Lowercase (ASCII), collapse whitespace runs, trim; optionally Porter-stem
// every whitespace token. A single stemmer pass can still change its own
// output ("izuaee" -> "izuae" -> "izua"), so each token is stemmed to a fixed
// point; this keeps the function idempotent for both settings. It terminates
// because no rule lengthens a word and the same-length rewrites (y->i,
// bli->ble) are never undone. A stem that would be empty (the bare token
// "s") leaves the token as it was.
inline std::string stem_to_fixed_point(std::string_view token) {
  std::string cur(token);
  for (auto next = porter::stem(cur); !next.empty() && next != cur; next = porter::stem(cur)) cur = std::move(next);
  return cur;
}

inline std::string normalize_phrase(std::string_view phrase, bool stem = false) {
  std::string lowered(phrase);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(), detail::ascii_lower);
  std::string out;
  for (auto tok : detail::split_ws(lowered)) {
    if (!out.empty()) out += ' ';
    if (stem)
      out += stem_to_fixed_point(tok);
    else
      out += tok;
  }
  return out;
}

// ---------------------------------------------------------------------------
// CoNLL-U

namespace detail {

inline std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

inline bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), is_space);
}

}  // namespace detail

// Reads CoNLL-U. Multiword-token ranges ("3-4") and empty nodes ("5.1") are
// skipped; the remaining ids must run 1..n. Line numbers in errors are
// 1-based and offset by first_line - 1, so callers can report positions
// inside a larger file.
inline std::vector<Sentence> parse_conllu(std::istream& in, std::size_t first_line = 1) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::vector<std::size_t> token_lines;
  bool in_block = false;

  auto flush = [&] {
    if (!in_block) return;
    const int n = static_cast<int>(current.tokens.size());
    if (n == 0) {  // comment-only block
      current = Sentence{};
      in_block = false;
      return;
    }
    for (std::size_t i = 0; i < current.tokens.size(); ++i) {
      const auto& t = current.tokens[i];
      if (t.head < 0 || t.head > n)
        throw ParseError("HEAD " + std::to_string(t.head) + " of token " + std::to_string(t.index) +
                             " references a nonexistent token",
                         token_lines[i]);
    }
    if (current.text.empty()) {
      for (const auto& t : current.tokens) {
        if (!current.text.empty()) current.text += ' ';
        current.text += t.form;
      }
    }
    current.ordinal = static_cast<int>(sentences.size());
    sentences.push_back(std::move(current));
    current = Sentence{};
    token_lines.clear();
    in_block = false;
  };

  std::string raw;
  std::size_t lineno = first_line - 1;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (detail::is_blank(line)) {
      flush();
      continue;
    }
    in_block = true;
    if (line.front() == '#') {
      constexpr std::string_view kText = "# text =";
      if (line.substr(0, kText.size()) == kText) {
        auto text = line.substr(kText.size());
        while (!text.empty() && detail::is_space(text.front())) text.remove_prefix(1);
        while (!text.empty() && detail::is_space(text.back())) text.remove_suffix(1);
        current.text = std::string(text);
      }
      continue;
    }

    const auto cols = detail::split_tabs(line);
    if (cols.size() != 10)
      throw ParseError("expected 10 tab-separated columns, found " + std::to_string(cols.size()), lineno);

    const auto id_col = cols[0];
    if (id_col.find('-') != std::string_view::npos || id_col.find('.') != std::string_view::npos) continue;

    const auto id = detail::parse_int(id_col);
    if (!id || *id < 1) throw ParseError("invalid token id '" + std::string(id_col) + "'", lineno);
    const int expected = static_cast<int>(current.tokens.size()) + 1;
    if (*id != expected)
      throw ParseError("token id " + std::to_string(*id) + " out of sequence, expected " + std::to_string(expected), lineno);

    Token tok;
    tok.index = *id;
    tok.form = std::string(cols[1]);
    if (tok.form.empty()) throw ParseError("empty FORM", lineno);

    const auto upos = cols[3] == "_" ? std::optional<Upos>(Upos::X) : parse_upos(cols[3]);
    if (!upos) throw ParseError("unknown UPOS '" + std::string(cols[3]) + "'", lineno);
    tok.upos = *upos;

    const auto head = detail::parse_int(cols[6]);
    if (!head) throw ParseError("invalid HEAD '" + std::string(cols[6]) + "'", lineno);
    if (*head == tok.index) throw ParseError("token " + std::to_string(tok.index) + " is its own head", lineno);
    tok.head = *head;
    tok.deprel = cols[7] == "_" ? std::string() : std::string(cols[7]);

    current.tokens.push_back(std::move(tok));
    token_lines.push_back(lineno);
  }
  flush();
  return sentences;
}

inline std::vector<Sentence> parse_conllu(std::string_view text, std::size_t first_line = 1) {
  std::istringstream in{std::string(text)};
  return parse_conllu(in, first_line);
}

// Writes the fields the reader retains; everything else is "_".
inline std::string serialize_conllu(const std::vector<Sentence>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    if (!s.text.empty()) out += "# text = " + s.text + "\n";
    for (const auto& t : s.tokens) {
      out += std::to_string(t.index);
      out += '\t' + t.form + "\t_\t";
      out += to_string(t.upos);
      out += "\t_\t_\t" + std::to_string(t.head) + '\t';
      out += t.deprel.empty() ? std::string("_") : t.deprel;
      out += "\t_\t_\n";
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dataset: JSON Lines, one {"id", "text", "conllu", "gold_keyphrases"?}
// record per line. Blank lines are ignored.

namespace detail {

inline Document parse_record(const nlohmann::json& rec, std::size_t lineno) {
  if (!rec.is_object()) throw ParseError("record is not a JSON object", lineno);
  Document doc;

  const auto id = rec.find("id");
  if (id == rec.end() || !id->is_string() || id->get_ref<const std::string&>().empty())
    throw DataError("line " + std::to_string(lineno) + ": record is missing a non-empty string \"id\"");
  doc.id = id->get<std::string>();

  const auto conllu = rec.find("conllu");
  if (conllu == rec.end() || !conllu->is_string())
    throw DataError("line " + std::to_string(lineno) + ": record '" + doc.id + "' is missing \"conllu\"");
  try {
    doc.sentences = parse_conllu(conllu->get_ref<const std::string&>());
  } catch (const ParseError& e) {
    throw ParseError("record '" + doc.id + "': conllu line " + std::to_string(e.line()) + ": " + e.detail(), lineno);
  }

  if (const auto text = rec.find("text"); text != rec.end()) {
    if (!text->is_string()) throw ParseError("record '" + doc.id + "': \"text\" must be a string", lineno);
    doc.text = text->get<std::string>();
  } else {
    for (const auto& s : doc.sentences) {
      if (!doc.text.empty()) doc.text += ' ';
      doc.text += s.text;
    }
  }

  if (const auto gold = rec.find("gold_keyphrases"); gold != rec.end() && !gold->is_null()) {
    if (!gold->is_array()) throw ParseError("record '" + doc.id + "': \"gold_keyphrases\" must be a list", lineno);
    std::vector<std::string> phrases;
    std::unordered_set<std::string> seen;
    for (const auto& g : *gold) {
      if (!g.is_string()) throw ParseError("record '" + doc.id + "': gold keyphrases must be strings", lineno);
      auto norm = normalize_phrase(g.get_ref<const std::string&>());
      if (!norm.empty() && seen.insert(norm).second) phrases.push_back(std::move(norm));
    }
    doc.gold = std::move(phrases);
  }
  return doc;
}

}  // namespace detail

inline std::vector<Document> load_dataset(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
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
    auto doc = detail::parse_record(rec, lineno);
    if (!ids.insert(doc.id).second)
      throw DataError("line " + std::to_string(lineno) + ": duplicate document id '" + doc.id + "'");
    docs.push_back(std::move(doc));
  }
  return docs;
}

inline std::vector<Document> load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  try {
    return load_dataset(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace nprank
