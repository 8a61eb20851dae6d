#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <unordered_map>

#include "gecdq/text_analysis.hpp"

namespace gecdq {

namespace {

using TagTable = std::unordered_map<std::string_view, PosTag>;

const TagTable& closed_class_table() {
  static const TagTable table = [] {
    TagTable t;
    auto add = [&t](PosTag tag, std::initializer_list<std::string_view> words) {
      for (auto w : words) t.emplace(w, tag);  // first list wins on overlap
    };
    add(PosTag::Det, {"the", "a", "an", "this", "that", "these", "those", "some", "any", "each",
                      "every", "no", "another", "either", "neither", "all", "both", "much",
                      "many", "few", "several", "such", "enough"});
    add(PosTag::Pron,
        {"i",       "me",        "my",         "mine",     "myself",   "you",     "your",
         "yours",   "yourself",  "yourselves", "he",       "him",      "his",     "himself",
         "she",     "her",       "hers",       "herself",  "it",       "its",     "itself",
         "we",      "us",        "our",        "ours",     "ourselves", "they",   "them",
         "their",   "theirs",    "themselves", "who",      "whom",     "whose",   "which",
         "what",    "someone",   "somebody",   "anyone",   "anybody",  "everyone", "everybody",
         "something", "anything", "everything", "nothing", "nobody",   "none",    "one"});
    add(PosTag::Prep, {"in",      "on",     "at",      "by",      "for",     "with",  "about",
                       "against", "between", "into",   "through", "during",  "before", "after",
                       "above",   "below",  "from",    "up",      "down",    "of",    "off",
                       "over",    "under",  "to",      "among",   "without", "within", "across",
                       "behind",  "beyond", "near",    "since",   "until",   "upon",  "toward",
                       "towards", "despite", "except", "via",     "per",     "onto",  "around",
                       "along",   "throughout", "beside", "besides", "inside", "outside"});
    add(PosTag::Conj, {"and", "or", "but", "nor", "yet", "because", "although", "though",
                       "while", "if", "unless", "whereas", "whether", "than"});
    add(PosTag::Part, {"not", "n't", "'s"});
    add(PosTag::Adv, {"very",    "also",   "too",      "so",      "just",     "only",
                      "even",    "still",  "already",  "always",  "never",    "often",
                      "sometimes", "usually", "here",  "there",   "now",      "then",
                      "again",   "soon",   "ever",     "quite",   "rather",   "almost",
                      "really",  "well",   "perhaps",  "maybe",   "however",  "therefore",
                      "thus",    "more",   "most",     "less",    "least",    "away",
                      "back",    "together", "ago",    "later",   "instead",  "else",
                      "anyway",  "indeed", "once",     "twice",   "today",    "tomorrow",
                      "yesterday", "tonight", "how",   "when",    "where",    "why"});
    return t;
  }();
  return table;
}

bool is_numeral(std::string_view w) {
  static constexpr std::array<std::string_view, 20> kNumberWords = {
      "zero", "two",   "three", "four",    "five",     "six",     "seven",
      "eight", "nine", "ten",   "eleven",  "twelve",   "twenty",  "thirty",
      "forty", "fifty", "hundred", "thousand", "million", "billion"};
  if (std::find(kNumberWords.begin(), kNumberWords.end(), w) != kNumberWords.end()) return true;
  bool digit = false;
  for (char c : w) {
    if (std::isdigit(static_cast<unsigned char>(c)))
      digit = true;
    else if (c != '.' && c != ',' && c != ':' && c != '/' && c != '-')
      return false;
  }
  return digit;
}

bool has_suffix(std::string_view w, std::string_view suffix) {
  // Require a stem of at least three characters so short words ("bed",
  // "thing") are not caught by the suffix rules.
  return w.size() >= suffix.size() + 3 && w.ends_with(suffix);
}

}  // namespace

std::optional<PosTag> closed_class_tag(std::string_view lower) {
  const auto& table = closed_class_table();
  if (auto it = table.find(lower); it != table.end()) return it->second;
  return std::nullopt;
}

PosTag tag_word(std::string_view lower, const VerbLexicon& verbs) {
  if (is_all_punct(lower)) return PosTag::Punct;
  if (is_numeral(lower)) return PosTag::Num;
  if (auto tag = closed_class_tag(lower)) return *tag;
  if (verbs.contains(lower)) return PosTag::Verb;
  if (has_suffix(lower, "ly")) return PosTag::Adv;
  if (has_suffix(lower, "ing") || has_suffix(lower, "ed")) return PosTag::Verb;
  for (auto s : {"ous", "ful", "ive"})
    if (has_suffix(lower, s)) return PosTag::Adj;
  for (auto s : {"tion", "ness", "ment"})
    if (has_suffix(lower, s)) return PosTag::Noun;
  return PosTag::Noun;
}

std::vector<Token> pos_tag(std::vector<Token> tokens, const VerbLexicon& verbs) {
  for (auto& t : tokens) t.pos = tag_word(t.lower, verbs);
  return tokens;
}

}  // namespace gecdq
