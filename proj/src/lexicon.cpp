#include <algorithm>
#include <string>

#include "gecdq/errors.hpp"
#include "gecdq/text_analysis.hpp"

namespace gecdq {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool has_space(std::string_view s) {
  return s.find_first_of(" \t") != std::string_view::npos;
}

struct Entry {
  std::size_t line;
  std::string head;
  std::vector<std::string> items;
};

// Reads "head: item, item, ..." lines; '#' starts a comment line.
std::vector<Entry> read_entries(std::istream& in) {
  std::vector<Entry> entries;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected 'word: item, item, ...'");
    Entry e{line_no, to_lower(trim(line.substr(0, colon))), {}};
    if (e.head.empty()) throw ParseError(line_no, "empty headword");
    if (has_space(e.head)) throw ParseError(line_no, "headword '" + e.head + "' contains whitespace");
    auto rest = line.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      if (item.empty()) {
        if (comma == std::string_view::npos && e.items.empty()) break;
        throw ParseError(line_no, "empty item in list");
      }
      if (has_space(item)) throw ParseError(line_no, "'" + std::string(item) + "' contains whitespace");
      auto lowered = to_lower(item);
      if (std::find(e.items.begin(), e.items.end(), lowered) == e.items.end()) e.items.push_back(std::move(lowered));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw ValidationError("lexicon is empty");
  return entries;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

std::vector<VerbFormGroup> load_verb_lexicon(std::istream& in) {
  std::vector<VerbFormGroup> groups;
  std::unordered_map<std::string, std::size_t> owner;  // form -> defining line
  for (auto& e : read_entries(in)) {
    VerbFormGroup g{e.head, {e.head}};
    for (auto& f : e.items)
      if (f != e.head) g.forms.push_back(f);
    if (g.forms.size() < 2)
      throw ValidationError(at_line(e.line) + "group '" + g.lemma + "' needs at least two forms");
    for (const auto& f : g.forms) {
      auto [it, fresh] = owner.emplace(f, e.line);
      if (!fresh)
        throw ValidationError(at_line(e.line) + "form '" + f + "' already belongs to the group on line " +
                              std::to_string(it->second));
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<ConfusionPair> load_confusion_lexicon(std::istream& in) {
  std::vector<ConfusionPair> pairs;
  std::unordered_map<std::string, std::size_t> seen;
  for (auto& e : read_entries(in)) {
    if (std::find(e.items.begin(), e.items.end(), e.head) != e.items.end())
      throw ValidationError(at_line(e.line) + "'" + e.head + "' is listed in its own confusion set");
    if (e.items.empty())
      throw ValidationError(at_line(e.line) + "'" + e.head + "' has no confusions");
    if (auto [it, fresh] = seen.emplace(e.head, e.line); !fresh)
      throw ValidationError(at_line(e.line) + "duplicate entry '" + e.head + "' (first on line " +
                            std::to_string(it->second) + ")");
    pairs.push_back({std::move(e.head), std::move(e.items)});
  }
  return pairs;
}

std::vector<std::string> load_wordlist(std::istream& in) {
  std::vector<std::string> words;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (has_space(line)) throw ParseError(line_no, "'" + std::string(line) + "' is not a single word");
    words.push_back(to_lower(line));
  }
  if (words.empty()) throw ValidationError("word list is empty");
  return words;
}

FormLexicon::FormLexicon(std::vector<VerbFormGroup> groups) : groups_(std::move(groups)) {
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const auto& group = groups_[g];
    if (group.forms.size() < 2 || group.forms.front() != group.lemma)
      throw ValidationError("group '" + group.lemma + "' must list its lemma first and have two forms");
    for (const auto& f : group.forms)
      if (!by_form_.emplace(f, g).second)
        throw ValidationError("form '" + f + "' appears in more than one group");
  }
}

std::optional<std::size_t> FormLexicon::group_of(std::string_view lower) const {
  if (auto it = by_form_.find(std::string(lower)); it != by_form_.end()) return it->second;
  return std::nullopt;
}

bool FormLexicon::same_group(std::string_view a, std::string_view b) const {
  const auto ga = group_of(a);
  return ga && ga == group_of(b);
}

ConfusionLexicon::ConfusionLexicon(std::vector<ConfusionPair> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.confusions.empty()) throw ValidationError("'" + e.word + "' has no confusions");
    if (std::find(e.confusions.begin(), e.confusions.end(), e.word) != e.confusions.end())
      throw ValidationError("'" + e.word + "' is listed in its own confusion set");
    if (!by_word_.emplace(e.word, i).second) throw ValidationError("duplicate entry '" + e.word + "'");
    for (const auto& c : e.confusions) by_member_[c].push_back(i);
  }
}

std::optional<std::size_t> ConfusionLexicon::entry_of(std::string_view word) const {
  if (auto it = by_word_.find(std::string(word)); it != by_word_.end()) return it->second;
  return std::nullopt;
}

bool ConfusionLexicon::confusable(std::string_view word, std::string_view candidate) const {
  const auto e = entry_of(word);
  if (!e) return false;
  const auto& cs = entries_[*e].confusions;
  return std::find(cs.begin(), cs.end(), candidate) != cs.end();
}

std::span<const std::size_t> ConfusionLexicon::containing(std::string_view word) const {
  if (auto it = by_member_.find(std::string(word)); it != by_member_.end()) return it->second;
  return {};
}

WordSet::WordSet(std::span<const std::string> words) : words_(words.begin(), words.end()) {}

}  // namespace gecdq
