#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace gecdq {

enum class PosTag { Noun, Verb, Adj, Adv, Pron, Det, Prep, Conj, Part, Punct, Num, Other };

std::string_view to_string(PosTag tag) noexcept;

struct Token {
  std::string surface;
  std::string lower;
  PosTag pos = PosTag::Other;
  int index = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

// ---------------------------------------------------------------------------
// String helpers shared by the aligner, typer and corruption engine.

/// ASCII lower-casing; bytes >= 0x80 pass through unchanged.
std::string to_lower(std::string_view s);
bool is_punct_char(char c) noexcept;
bool is_all_punct(std::string_view s) noexcept;
std::string join(std::span<const std::string> words, std::string_view sep = " ");
std::vector<std::string> surfaces(std::span<const Token> tokens);

/// Levenshtein distance over bytes with the given substitution cost.
std::size_t char_edit_distance(std::string_view a, std::string_view b, std::size_t substitution = 1);
/// Indel distance (substitution counted as 2) over |a| + |b|, i.e. one minus
/// the usual similarity ratio. In [0, 1]; 0 for two empty strings.
double normalized_char_distance(std::string_view a, std::string_view b);

// ---------------------------------------------------------------------------
// Tokenization and tagging.

/// Whitespace split, then leading/trailing punctuation detached one character
/// at a time and clitics split off ("don't" -> do n't, "clients'" -> clients ').
/// Indices are filled; pos is left as Other.
std::vector<Token> tokenize(std::string_view sentence);

class FormLexicon;
using VerbLexicon = FormLexicon;

/// Priority: punctuation, numeral, closed-class lists, verb lexicon,
/// suffix rules, default NOUN.
std::vector<Token> pos_tag(std::vector<Token> tokens, const VerbLexicon& verbs);
PosTag tag_word(std::string_view lower, const VerbLexicon& verbs);

/// Closed-class lookup used by the tagger; nullopt when the word is open-class.
std::optional<PosTag> closed_class_tag(std::string_view lower);

// ---------------------------------------------------------------------------
// Lexicons.

struct VerbFormGroup {
  std::string lemma;
  std::vector<std::string> forms;  // includes lemma, first

  friend bool operator==(const VerbFormGroup&, const VerbFormGroup&) = default;
};

struct ConfusionPair {
  std::string word;
  std::vector<std::string> confusions;

  friend bool operator==(const ConfusionPair&, const ConfusionPair&) = default;
};

std::vector<VerbFormGroup> load_verb_lexicon(std::istream& in);
std::vector<ConfusionPair> load_confusion_lexicon(std::istream& in);
std::vector<std::string> load_wordlist(std::istream& in);

/// Disjoint word-form groups (verb inflections, irregular noun plurals,
/// adjective degrees) indexed by form. Immutable after construction.
class FormLexicon {
 public:
  FormLexicon() = default;
  explicit FormLexicon(std::vector<VerbFormGroup> groups);

  const std::vector<VerbFormGroup>& groups() const noexcept { return groups_; }
  std::optional<std::size_t> group_of(std::string_view lower) const;
  bool contains(std::string_view lower) const { return group_of(lower).has_value(); }
  bool same_group(std::string_view a, std::string_view b) const;
  bool empty() const noexcept { return groups_.empty(); }

 private:
  std::vector<VerbFormGroup> groups_;
  std::unordered_map<std::string, std::size_t> by_form_;
};

/// Confusion entries indexed by headword and by membership.
class ConfusionLexicon {
 public:
  ConfusionLexicon() = default;
  explicit ConfusionLexicon(std::vector<ConfusionPair> entries);

  const std::vector<ConfusionPair>& entries() const noexcept { return entries_; }
  std::optional<std::size_t> entry_of(std::string_view word) const;
  /// True when `candidate` is one of `word`'s own confusions.
  bool confusable(std::string_view word, std::string_view candidate) const;
  /// Entries whose confusion sets contain `word`.
  std::span<const std::size_t> containing(std::string_view word) const;
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::vector<ConfusionPair> entries_;
  std::unordered_map<std::string, std::size_t> by_word_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_member_;
};

class WordSet {
 public:
  WordSet() = default;
  explicit WordSet(std::span<const std::string> words);

  bool contains(std::string_view lower) const { return words_.contains(std::string(lower)); }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Everything the tagger, aligner and typer consult. Shareable across threads.
struct LanguageResources {
  VerbLexicon verbs;
  WordSet dictionary;
  /// Irregular nouns: lemma first, then irregular plural(s).
  FormLexicon nouns;
  /// Adjective degree groups: positive, comparative, superlative.
  FormLexicon adjectives;

  bool in_dictionary(std::string_view lower) const { return dictionary.contains(lower); }
};

}  // namespace gecdq
