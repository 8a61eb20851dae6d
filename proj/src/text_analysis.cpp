#include "gecdq/text_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace gecdq {

namespace {

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_word_char(char c) noexcept { return !is_space(c) && !is_punct_char(c); }

void emit(std::vector<Token>& out, std::string_view surface) {
  Token t;
  t.surface = std::string(surface);
  t.lower = to_lower(surface);
  t.index = static_cast<int>(out.size());
  out.push_back(std::move(t));
}

void split_chunk(std::string_view chunk, std::vector<Token>& out);

// `core` has no leading punctuation other than an apostrophe that starts a
// clitic, and no trailing punctuation.
void split_clitics(std::string_view core, std::vector<Token>& out) {
  const std::string lower = to_lower(core);
  if (lower == "n't") {
    emit(out, core);
    return;
  }
  if (lower.size() > 3 && lower.ends_with("n't")) {
    split_chunk(core.substr(0, core.size() - 3), out);
    emit(out, core.substr(core.size() - 3));
    return;
  }
  std::size_t start = 0;
  for (std::size_t i = 1; i + 1 < core.size(); ++i) {
    if (core[i] == '\'' && is_word_char(core[i - 1]) && is_word_char(core[i + 1])) {
      emit(out, core.substr(start, i - start));
      start = i;
    }
  }
  emit(out, core.substr(start));
}

void split_chunk(std::string_view chunk, std::vector<Token>& out) {
  std::size_t b = 0;
  std::size_t e = chunk.size();
  while (b < e && is_punct_char(chunk[b]) &&
         !(chunk[b] == '\'' && b + 1 < e && is_word_char(chunk[b + 1]))) {
    emit(out, chunk.substr(b, 1));
    ++b;
  }
  std::size_t trail = e;
  while (trail > b && is_punct_char(chunk[trail - 1])) --trail;
  if (trail > b) split_clitics(chunk.substr(b, trail - b), out);
  for (std::size_t i = trail; i < e; ++i) emit(out, chunk.substr(i, 1));
}

}  // namespace

std::string_view to_string(PosTag tag) noexcept {
  switch (tag) {
    case PosTag::Noun: return "NOUN";
    case PosTag::Verb: return "VERB";
    case PosTag::Adj: return "ADJ";
    case PosTag::Adv: return "ADV";
    case PosTag::Pron: return "PRON";
    case PosTag::Det: return "DET";
    case PosTag::Prep: return "PREP";
    case PosTag::Conj: return "CONJ";
    case PosTag::Part: return "PART";
    case PosTag::Punct: return "PUNCT";
    case PosTag::Num: return "NUM";
    case PosTag::Other: return "OTHER";
  }
  return "OTHER";
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

bool is_punct_char(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

bool is_all_punct(std::string_view s) noexcept {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_punct_char);
}

std::string join(std::span<const std::string> words, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += sep;
    out += words[i];
  }
  return out;
}

std::vector<std::string> surfaces(std::span<const Token> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::size_t char_edit_distance(std::string_view a, std::string_view b, std::size_t substitution) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : substitution)});
      diag = up;
    }
  }
  return row[b.size()];
}

double normalized_char_distance(std::string_view a, std::string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 0.0;
  return static_cast<double>(char_edit_distance(a, b, 2)) / static_cast<double>(total);
}

std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !is_space(sentence[j])) ++j;
    if (j > i) split_chunk(sentence.substr(i, j - i), out);
    i = j;
  }
  return out;
}

}  // namespace gecdq
