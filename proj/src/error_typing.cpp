#include "gecdq/error_typing.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace gecdq {

namespace {

constexpr std::array<std::string_view, kErrorTypeCount> kLabels = {
    "OTHER", "ADV",  "PREP", "ORTH",       "NOUN",      "MORPH", "DET",  "PRON",
    "VERB:SVA", "PART", "VERB", "VERB:TENSE", "VERB:FORM", "SPELL", "CONJ", "ADJ",
    "WO",    "PUNCT", "NOUN:NUM", "ADJ:FORM", "CONTR", "NOUN:POS", "NOUN:INFL"};

using TokenSpan = std::span<const Token>;

bool is_contraction(std::string_view lower) {
  return lower == "'d" || lower == "'ll" || lower == "'m" || lower == "n't" || lower == "'re" || lower == "'ve";
}

bool expands(std::string_view clitic, std::string_view word) {
  if (clitic == "n't") return word == "not";
  if (clitic == "'ll") return word == "will";
  if (clitic == "'re") return word == "are";
  if (clitic == "'ve") return word == "have";
  if (clitic == "'m") return word == "am";
  if (clitic == "'d") return word == "would" || word == "had";
  return false;
}

std::string squash(TokenSpan side) {
  std::string s;
  for (const auto& t : side)
    for (char c : t.lower)
      if (c != '-') s += c;
  return s;
}

bool is_alpha_word(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
  });
}

// --- verb morphology -------------------------------------------------------

enum class VerbKind { Base, Present, ThirdSingular, Past, Participle, Gerund };

VerbKind be_kind(std::string_view w) {
  if (w == "be") return VerbKind::Base;
  if (w == "am" || w == "are") return VerbKind::Present;
  if (w == "is") return VerbKind::ThirdSingular;
  if (w == "was" || w == "were") return VerbKind::Past;
  if (w == "been") return VerbKind::Participle;
  return VerbKind::Gerund;
}

VerbKind verb_kind(std::string_view w, const VerbFormGroup& group) {
  if (group.lemma == "be") return be_kind(w);
  if (w == group.lemma) return VerbKind::Base;
  if (w.ends_with("ing")) return VerbKind::Gerund;
  if (w.ends_with("s") && !group.lemma.ends_with("s")) return VerbKind::ThirdSingular;
  if (w.ends_with("es") || w.ends_with("ies")) return VerbKind::ThirdSingular;
  // Remaining forms are past tense or past participle. With two of them the
  // participle is the one ending in -n, else the one listed later.
  std::vector<std::string_view> rest;
  for (const auto& f : group.forms) {
    if (f == group.lemma || f.ends_with("ing")) continue;
    if (f.ends_with("s") && !group.lemma.ends_with("s")) continue;
    rest.push_back(f);
  }
  if (rest.size() < 2) return VerbKind::Past;
  const bool w_n = w.ends_with("n");
  const bool other_n = std::any_of(rest.begin(), rest.end(), [&](auto f) { return f != w && f.ends_with("n"); });
  if (w_n != other_n) return w_n ? VerbKind::Participle : VerbKind::Past;
  return w == rest.back() ? VerbKind::Participle : VerbKind::Past;
}

bool blocks_agreement(std::string_view lower) {
  static constexpr std::array<std::string_view, 13> kGovernors = {
      "to", "can", "could", "will", "would", "shall", "should", "must", "may", "might", "do", "does", "did"};
  return std::find(kGovernors.begin(), kGovernors.end(), lower) != kGovernors.end();
}

// Nearest PRON/NOUN left of the edit stands in for a subject.
bool has_subject(TokenSpan source, int edit_start) {
  if (edit_start > 0 && blocks_agreement(source[edit_start - 1].lower)) return false;
  for (int i = edit_start - 1; i >= 0; --i)
    if (source[i].pos == PosTag::Pron || source[i].pos == PosTag::Noun) return true;
  return false;
}

ErrorType verb_subtype(const Token& a, const Token& b, const VerbFormGroup& group, TokenSpan source,
                       int edit_start) {
  const VerbKind ka = verb_kind(a.lower, group);
  const VerbKind kb = verb_kind(b.lower, group);
  auto either = [&](VerbKind k) { return ka == k || kb == k; };
  if (either(VerbKind::Gerund) || either(VerbKind::Participle)) return ErrorType::VerbForm;
  if (ka == VerbKind::Past && kb == VerbKind::Past)
    return has_subject(source, edit_start) ? ErrorType::VerbSva : ErrorType::VerbTense;
  if (either(VerbKind::Past)) return ErrorType::VerbTense;
  return has_subject(source, edit_start) ? ErrorType::VerbSva : ErrorType::VerbForm;
}

// --- noun morphology -------------------------------------------------------

bool regular_plural(std::string_view sg, std::string_view pl) {
  if (pl.size() == sg.size() + 1 && pl.starts_with(sg) && pl.ends_with("s")) return true;
  if (pl.size() == sg.size() + 2 && pl.starts_with(sg) && pl.ends_with("es")) return true;
  return sg.size() > 1 && sg.ends_with("y") && pl.size() == sg.size() + 2 &&
         pl.substr(0, sg.size() - 1) == sg.substr(0, sg.size() - 1) && pl.ends_with("ies");
}

// Group of the irregular noun that `w` wrongly regularizes ("childs" -> child).
std::optional<std::size_t> regularized_irregular(std::string_view w, const FormLexicon& nouns) {
  for (std::size_t cut : {1u, 2u}) {
    if (w.size() <= cut) continue;
    const auto stem = w.substr(0, w.size() - cut);
    const auto g = nouns.group_of(stem);
    if (g && nouns.groups()[*g].lemma == stem && regular_plural(stem, w) && !nouns.contains(w)) return g;
  }
  return std::nullopt;
}

std::optional<ErrorType> noun_number(const Token& a, const Token& b, const FormLexicon& nouns) {
  if (a.pos != PosTag::Noun && b.pos != PosTag::Noun) return std::nullopt;
  const auto infl_partner = [&](const Token& wrong, const Token& other) {
    const auto g = regularized_irregular(wrong.lower, nouns);
    return g && nouns.group_of(other.lower) == g;
  };
  if (infl_partner(a, b) || infl_partner(b, a)) return ErrorType::NounInfl;
  if (regular_plural(a.lower, b.lower) || regular_plural(b.lower, a.lower)) return ErrorType::NounNum;
  if (nouns.same_group(a.lower, b.lower)) return ErrorType::NounNum;
  return std::nullopt;
}

// --- POS-based labels ------------------------------------------------------

std::optional<ErrorType> pos_label(PosTag p) {
  switch (p) {
    case PosTag::Det: return ErrorType::Det;
    case PosTag::Prep: return ErrorType::Prep;
    case PosTag::Pron: return ErrorType::Pron;
    case PosTag::Conj: return ErrorType::Conj;
    case PosTag::Part: return ErrorType::Part;
    case PosTag::Adv: return ErrorType::Adv;
    case PosTag::Adj: return ErrorType::Adj;
    case PosTag::Noun: return ErrorType::Noun;
    case PosTag::Verb: return ErrorType::Verb;
    default: return std::nullopt;
  }
}

bool open_class(PosTag p) {
  return p == PosTag::Noun || p == PosTag::Verb || p == PosTag::Adj || p == PosTag::Adv;
}

std::optional<ErrorType> shared_pos(TokenSpan src, TokenSpan tgt, const LanguageResources& res) {
  std::optional<PosTag> pos;
  for (TokenSpan side : {src, tgt}) {
    for (const auto& t : side) {
      if (pos && *pos != t.pos) return std::nullopt;
      pos = t.pos;
      // Out-of-dictionary open-class words are left for the spelling rule.
      if (open_class(t.pos) && !res.in_dictionary(t.lower)) return std::nullopt;
    }
  }
  return pos ? pos_label(*pos) : std::nullopt;
}

std::size_t common_prefix(std::string_view a, std::string_view b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return n;
}

}  // namespace

std::string_view to_string(ErrorType t) noexcept { return kLabels[index_of(t)]; }

std::optional<ErrorType> parse_error_type(std::string_view label) noexcept {
  for (std::size_t i = 0; i < kLabels.size(); ++i)
    if (kLabels[i] == label) return static_cast<ErrorType>(i);
  return std::nullopt;
}

const std::array<ErrorType, kErrorTypeCount>& all_error_types() noexcept {
  static const auto types = [] {
    std::array<ErrorType, kErrorTypeCount> a{};
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<ErrorType>(i);
    return a;
  }();
  return types;
}

ErrorType classify_edit(const Edit& edit, TokenSpan source, TokenSpan target, const LanguageResources& res) {
  const TokenSpan src = source.subspan(edit.src_start, edit.src_end - edit.src_start);
  const TokenSpan tgt = target.subspan(edit.tgt_start, edit.tgt_end - edit.tgt_start);
  const bool single = src.size() == 1 && tgt.size() == 1;

  // 1. punctuation only
  {
    const auto punct = [](const Token& t) { return t.pos == PosTag::Punct; };
    if (std::all_of(src.begin(), src.end(), punct) && std::all_of(tgt.begin(), tgt.end(), punct))
      return ErrorType::Punct;
  }
  // 2. contractions
  if (src.empty() != tgt.empty()) {
    const TokenSpan side = src.empty() ? tgt : src;
    if (side.size() == 1 && is_contraction(side[0].lower)) return ErrorType::Contr;
  }
  if (single && (expands(src[0].lower, tgt[0].lower) || expands(tgt[0].lower, src[0].lower)))
    return ErrorType::Contr;
  // 3. case, hyphenation, spacing
  if (!src.empty() && !tgt.empty() && squash(src) == squash(tgt)) return ErrorType::Orth;
  // 4. word order
  if (src.size() >= 2 && src.size() == tgt.size()) {
    std::vector<std::string> a, b;
    for (const auto& t : src) a.push_back(t.lower);
    for (const auto& t : tgt) b.push_back(t.lower);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a == b) return ErrorType::Wo;
  }
  // 5. verb inflection within one group
  if (single) {
    if (const auto g = res.verbs.group_of(src[0].lower); g && res.verbs.group_of(tgt[0].lower) == g)
      return verb_subtype(src[0], tgt[0], res.verbs.groups()[*g], source, edit.src_start);
  }
  // 6. possessive
  {
    const auto possessive = [](const Token& t) { return t.lower == "'s" || t.lower.ends_with("'s"); };
    const bool has_pos = std::any_of(src.begin(), src.end(), possessive) ||
                         std::any_of(tgt.begin(), tgt.end(), possessive);
    const auto noun = [](const Token& t) { return t.pos == PosTag::Noun; };
    // The tagger has no context, so "dog" may come out as a verb; any open-class
    // word can carry the possessive.
    const auto open_class = [](const Token& t) {
      return t.pos == PosTag::Noun || t.pos == PosTag::Verb || t.pos == PosTag::Adj;
    };
    const bool near_noun = std::any_of(src.begin(), src.end(), noun) || std::any_of(tgt.begin(), tgt.end(), noun) ||
                           (edit.src_start > 0 && open_class(source[edit.src_start - 1]));
    if (has_pos && near_noun) return ErrorType::NounPos;
  }
  // 7. noun number / inflection
  if (single) {
    if (auto t = noun_number(src[0], tgt[0], res.nouns)) return *t;
  }
  // 8. adjective degree
  if (single && res.adjectives.same_group(src[0].lower, tgt[0].lower)) return ErrorType::AdjForm;
  // 9. same part of speech (or the POS of the only non-empty side)
  if (auto t = shared_pos(src, tgt, res)) return *t;
  // 10. spelling: one side is out of dictionary, the other is a real word
  if (single && is_alpha_word(src[0].lower) && is_alpha_word(tgt[0].lower) &&
      normalized_char_distance(src[0].lower, tgt[0].lower) < 0.5) {
    const bool src_known = res.in_dictionary(src[0].lower);
    const bool tgt_known = res.in_dictionary(tgt[0].lower);
    if (src_known != tgt_known) return ErrorType::Spell;
  }
  // 11. shared stem
  if (single && common_prefix(src[0].lower, tgt[0].lower) >= 3) return ErrorType::Morph;
  // 12.
  return ErrorType::Other;
}

AnalyzedPair EditAnalyzer::analyze(std::string_view source, std::string_view target) const {
  AnalyzedPair out;
  out.source = pos_tag(tokenize(source), resources_->verbs);
  out.target = pos_tag(tokenize(target), resources_->verbs);
  out.script = align(out.source, out.target, costs_, &resources_->verbs);
  out.types.reserve(out.script.edits.size());
  for (const auto& e : out.script.edits) out.types.push_back(classify_edit(e, out.source, out.target, *resources_));
  return out;
}

std::vector<TypedEdit> EditAnalyzer::typed_edits(const SentencePair& pair) const {
  auto a = analyze(pair);
  std::vector<TypedEdit> out;
  out.reserve(a.types.size());
  for (std::size_t i = 0; i < a.types.size(); ++i) out.push_back({std::move(a.script.edits[i]), a.types[i]});
  return out;
}

long long ErrorCounts::total() const noexcept { return std::accumulate(counts.begin(), counts.end(), 0LL); }

ErrorCounts& ErrorCounts::operator+=(const ErrorCounts& other) noexcept {
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  return *this;
}

double ErrorDistribution::sum() const noexcept { return std::accumulate(mass.begin(), mass.end(), 0.0); }

ErrorDistribution ErrorDistribution::from_counts(const ErrorCounts& counts) {
  ErrorDistribution d;
  d.total_edits = counts.total();
  if (d.total_edits == 0) return d;
  for (std::size_t i = 0; i < kErrorTypeCount; ++i)
    d.mass[i] = 100.0 * static_cast<double>(counts.counts[i]) / static_cast<double>(d.total_edits);
  return d;
}

ErrorDistribution ErrorDistribution::from_percentages(const std::array<double, kErrorTypeCount>& mass,
                                                      long long total_edits) {
  ErrorDistribution d;
  d.mass = mass;
  d.total_edits = total_edits;
  return d;
}

void to_json(nlohmann::json& j, const ErrorDistribution& d) {
  j = nlohmann::json::object();
  for (auto t : all_error_types()) j[std::string(to_string(t))] = d[t];
  j["total_edits"] = d.total_edits;
}

void from_json(const nlohmann::json& j, ErrorDistribution& d) {
  for (auto t : all_error_types()) d.mass[index_of(t)] = j.at(std::string(to_string(t))).get<double>();
  d.total_edits = j.at("total_edits").get<long long>();
}

ErrorCounts count_error_types(const Dataset& dataset, const EditAnalyzer& analyzer, const Executor& executor) {
  // Per-pair counts land in fixed slots; summing in index order keeps the
  // result independent of the thread count.
  const auto per_pair = executor.map<ErrorCounts>(dataset.size(), [&](std::size_t i) {
    ErrorCounts c;
    for (auto t : analyzer.analyze(dataset.pairs[i]).types) c.add(t);
    return c;
  });
  ErrorCounts total;
  for (const auto& c : per_pair) total += c;
  return total;
}

ErrorDistribution distribution_of(const Dataset& dataset, const EditAnalyzer& analyzer, const Executor& executor) {
  return ErrorDistribution::from_counts(count_error_types(dataset, analyzer, executor));
}

double other_share(const ErrorDistribution& dist) noexcept { return dist[ErrorType::Other]; }

}  // namespace gecdq
