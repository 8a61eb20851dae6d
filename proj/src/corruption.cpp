#include "gecdq/corruption.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "gecdq/errors.hpp"

namespace gecdq {

namespace {

constexpr std::array<std::string_view, kCorruptionRuleCount> kRuleNames = {"VERB", "REPLACE", "INSERT", "DELETE"};

// Substream indices reserved for corpus assembly; corruption uses the item index.
constexpr std::uint64_t kPickStream = ~std::uint64_t{0} - 1;
constexpr std::uint64_t kShuffleStream = ~std::uint64_t{0};

constexpr int kReplaceRetries = 16;

std::string match_case(std::string word, const std::string& like) {
  if (!like.empty() && std::isupper(static_cast<unsigned char>(like[0])) && !word.empty())
    word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
  return word;
}

template <class T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[rng.below(v.size())];
}

// Uniform index in [0, n) other than `skip`.
std::size_t pick_other(std::size_t n, std::size_t skip, Rng& rng) {
  const std::size_t k = rng.below(n - 1);
  return k >= skip ? k + 1 : k;
}

bool applicable(CorruptionRule rule, CorruptionMode mode, const Token& token, const CorruptionRuleSet& rules) {
  switch (rule) {
    case CorruptionRule::Verb: {
      const auto g = rules.verbs().group_of(token.lower);
      if (!g) return false;
      return mode == CorruptionMode::Plausible ? rules.verbs().groups()[*g].forms.size() >= 2
                                               : rules.verbs().groups().size() >= 2;
    }
    case CorruptionRule::Replace:
      return rules.confusions().entry_of(token.lower).has_value() &&
             (mode == CorruptionMode::Plausible || rules.confusions().entries().size() >= 2);
    case CorruptionRule::Insert:
      return true;
    case CorruptionRule::Delete:
      return mode == CorruptionMode::Plausible ? rules.is_deletion_word(token.lower)
                                               : rules.is_insertion_word(token.lower);
  }
  return false;
}

std::string labeled_field(std::string_view s) {
  std::string out(s);
  while (!out.empty() && (out.back() == '\r' || out.back() == ' ')) out.pop_back();
  return out;
}

}  // namespace

std::string_view to_string(CorruptionMode m) noexcept {
  return m == CorruptionMode::Plausible ? "PLAUSIBLE" : "IMPLAUSIBLE";
}

std::string_view to_string(CorruptionRule r) noexcept { return kRuleNames[static_cast<std::size_t>(r)]; }

std::optional<CorruptionMode> parse_corruption_mode(std::string_view s) noexcept {
  if (s == "PLAUSIBLE" || s == "plausible") return CorruptionMode::Plausible;
  if (s == "IMPLAUSIBLE" || s == "implausible") return CorruptionMode::Implausible;
  return std::nullopt;
}

std::optional<CorruptionRule> parse_corruption_rule(std::string_view s) noexcept {
  const std::string upper = [&] {
    std::string u(s);
    for (auto& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return u;
  }();
  for (std::size_t i = 0; i < kRuleNames.size(); ++i)
    if (kRuleNames[i] == upper) return static_cast<CorruptionRule>(i);
  return std::nullopt;
}

void CorruptionConfig::validate() const {
  if (!(per_token_error_prob >= 0.0 && per_token_error_prob <= 1.0))
    throw ValidationError("per_token_error_prob must be in [0, 1]");
  if (max_errors_per_sentence < 1) throw ValidationError("max_errors_per_sentence must be >= 1");
  double total = 0;
  for (double w : rule_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("rule weights must be finite and non-negative");
    total += w;
  }
  if (total <= 0) throw ValidationError("rule weights are all zero");
}

void to_json(nlohmann::json& j, const CorruptionConfig& c) {
  nlohmann::json weights = nlohmann::json::object();
  for (std::size_t i = 0; i < kCorruptionRuleCount; ++i) weights[std::string(kRuleNames[i])] = c.rule_weights[i];
  j = {{"mode", to_string(c.mode)},
       {"per_token_error_prob", c.per_token_error_prob},
       {"max_errors_per_sentence", c.max_errors_per_sentence},
       {"rule_weights", weights},
       {"seed", c.seed}};
}

CorruptionRuleSet::CorruptionRuleSet(std::vector<VerbFormGroup> verb_groups, std::vector<ConfusionPair> confusions,
                                     std::vector<std::string> insertions, std::vector<std::string> deletions)
    : verbs_(std::move(verb_groups)),
      confusions_(std::move(confusions)),
      insertions_(std::move(insertions)),
      deletions_(std::move(deletions)),
      insertion_set_(insertions_.begin(), insertions_.end()),
      deletion_set_(deletions_.begin(), deletions_.end()) {
  if (verbs_.empty()) throw ValidationError("verb lexicon is empty");
  if (confusions_.empty()) throw ValidationError("confusion lexicon is empty");
  if (insertions_.empty()) throw ValidationError("insertion list is empty");
  if (deletions_.empty()) throw ValidationError("deletion list is empty");
}

std::optional<std::vector<std::string>> apply_rule(CorruptionRule rule, CorruptionMode mode, const Token& token,
                                                   const CorruptionRuleSet& rules, Rng& rng) {
  if (!applicable(rule, mode, token, rules)) return std::nullopt;
  const bool plausible = mode == CorruptionMode::Plausible;
  switch (rule) {
    case CorruptionRule::Verb: {
      const auto& groups = rules.verbs().groups();
      const std::size_t own = *rules.verbs().group_of(token.lower);
      if (plausible) {
        std::vector<std::string> others;
        for (const auto& f : groups[own].forms)
          if (f != token.lower) others.push_back(f);
        if (others.empty()) return std::nullopt;
        return std::vector{match_case(pick(others, rng), token.surface)};
      }
      const auto& group = groups[pick_other(groups.size(), own, rng)];
      return std::vector{match_case(pick(group.forms, rng), token.surface)};
    }
    case CorruptionRule::Replace: {
      const auto& entries = rules.confusions().entries();
      const std::size_t own = *rules.confusions().entry_of(token.lower);
      if (plausible) return std::vector{match_case(pick(entries[own].confusions, rng), token.surface)};
      // A confusion of some other entry; redraw on accidental overlap with our own set.
      for (int attempt = 0; attempt < kReplaceRetries; ++attempt) {
        const auto& word = pick(entries[pick_other(entries.size(), own, rng)].confusions, rng);
        if (word != token.lower && !rules.confusions().confusable(token.lower, word))
          return std::vector{match_case(word, token.surface)};
      }
      return std::nullopt;
    }
    case CorruptionRule::Insert: {
      const auto& word = pick(plausible ? rules.insertions() : rules.deletions(), rng);
      return std::vector{word, token.surface};
    }
    case CorruptionRule::Delete:
      return std::vector<std::string>{};
  }
  return std::nullopt;
}

CorruptionOutcome corrupt(std::string_view sentence, const CorruptionRuleSet& rules, const CorruptionConfig& config,
                          Rng& rng) {
  const auto tokens = tokenize(sentence);
  if (tokens.empty()) throw ValidationError("cannot corrupt an empty sentence");
  const auto original = surfaces(tokens);

  std::vector<int> sites;
  for (const auto& t : tokens)
    if (!is_all_punct(t.surface) && rng.bernoulli(config.per_token_error_prob)) sites.push_back(t.index);
  if (static_cast<int>(sites.size()) > config.max_errors_per_sentence) sites.resize(config.max_errors_per_sentence);

  CorruptionOutcome out;
  std::vector<std::vector<std::string>> pieces;
  pieces.reserve(original.size());
  for (const auto& s : original) pieces.push_back({s});

  for (int site : sites) {
    const Token& token = tokens[site];
    std::array<double, kCorruptionRuleCount> weights{};
    double total = 0;
    for (std::size_t r = 0; r < kCorruptionRuleCount; ++r) {
      if (config.rule_weights[r] > 0 && applicable(static_cast<CorruptionRule>(r), config.mode, token, rules)) {
        weights[r] = config.rule_weights[r];
        total += weights[r];
      }
    }
    if (total <= 0) continue;
    double u = rng.uniform01() * total;
    std::size_t chosen = kCorruptionRuleCount;
    for (std::size_t r = 0; r < kCorruptionRuleCount; ++r) {
      if (weights[r] == 0) continue;
      chosen = r;
      if (u < weights[r]) break;
      u -= weights[r];
    }
    const auto rule = static_cast<CorruptionRule>(chosen);
    auto replacement = apply_rule(rule, config.mode, token, rules, rng);
    if (!replacement) continue;
    pieces[site] = *replacement;
    out.mutations.push_back({rule, site, token.surface, std::move(*replacement)});
  }

  std::vector<std::string> corrupted;
  for (auto& p : pieces)
    for (auto& w : p) corrupted.push_back(std::move(w));
  out.pair.target = join(original);
  out.pair.source = out.mutations.empty() ? out.pair.target : join(corrupted);
  return out;
}

CorruptionOutcome corrupt_with_retries(std::string_view sentence, const CorruptionRuleSet& rules,
                                       const CorruptionConfig& config, std::uint64_t index, int max_attempts) {
  CorruptionOutcome out;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng = Rng::substream(config.seed, index, static_cast<std::uint64_t>(attempt));
    out = corrupt(sentence, rules, config, rng);
    if (out.corrupted()) break;
  }
  return out;
}

std::string_view to_string(Label l) noexcept { return l == Label::Reliable ? "RELIABLE" : "UNRELIABLE"; }

std::string_view to_string(Origin o) noexcept {
  switch (o) {
    case Origin::Human: return "HUMAN";
    case Origin::PlausibleRule: return "PLAUSIBLE_RULE";
    case Origin::ImplausibleRule: return "IMPLAUSIBLE_RULE";
  }
  return "HUMAN";
}

void to_json(nlohmann::json& j, const CorpusBuildStats& s) {
  j = {{"requested", s.requested},
       {"reliable", s.reliable},
       {"unreliable", s.unreliable},
       {"dropped_pairs", s.dropped_pairs},
       {"resampled_sentences", s.resampled_sentences}};
}

std::vector<LabeledPair> build_classifier_corpus(const Dataset& positives, std::span<const std::string> clean,
                                                 const CorruptionRuleSet& rules, CorruptionConfig config,
                                                 std::uint64_t seed, bool allow_resample, CorpusBuildStats* stats,
                                                 const Executor& executor) {
  config.mode = CorruptionMode::Implausible;
  config.seed = seed;
  config.validate();
  const std::size_t n = positives.size();
  if (n == 0) throw ValidationError("no positive pairs to balance against");
  if (clean.empty()) throw ValidationError("no clean sentences to corrupt");
  if (clean.size() < n && !allow_resample)
    throw ValidationError("need " + std::to_string(n) + " clean sentences for " + std::to_string(n) +
                          " positives, got " + std::to_string(clean.size()));

  CorpusBuildStats st;
  st.requested = n;
  std::vector<std::size_t> order(clean.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng picker = Rng::substream(seed, kPickStream);
  picker.shuffle(order);
  if (order.size() > n) order.resize(n);
  while (order.size() < n) {
    order.push_back(picker.below(clean.size()));
    ++st.resampled_sentences;
  }

  const auto outcomes = executor.map<CorruptionOutcome>(n, [&](std::size_t i) {
    return corrupt_with_retries(clean[order[i]], rules, config, i, kMaxCorruptionAttempts);
  });

  std::vector<LabeledPair> out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!outcomes[i].corrupted()) {
      ++st.dropped_pairs;
      continue;
    }
    out.push_back({positives.pairs[i], Label::Reliable, Origin::Human});
    out.push_back({outcomes[i].pair, Label::Unreliable, Origin::ImplausibleRule});
  }
  st.reliable = st.unreliable = out.size() / 2;
  if (stats) *stats = st;
  if (st.unreliable == 0)
    throw ValidationError("could not reach a 1:1 ratio: 0 of " + std::to_string(n) +
                          " unreliable pairs generated");
  Rng::substream(seed, kShuffleStream).shuffle(out);
  return out;
}

std::vector<LabeledPair> build_contrast_corpus(std::span<const std::string> clean, std::size_t per_mode,
                                               const CorruptionRuleSet& rules, CorruptionConfig config,
                                               std::uint64_t seed, CorpusBuildStats* stats,
                                               const Executor& executor) {
  config.seed = seed;
  config.validate();
  if (clean.empty()) throw ValidationError("no clean sentences to corrupt");
  // Item 2i is the plausible corruption of sentence i, 2i+1 the implausible one.
  const auto outcomes = executor.map<CorruptionOutcome>(2 * per_mode, [&](std::size_t k) {
    CorruptionConfig c = config;
    c.mode = k % 2 == 0 ? CorruptionMode::Plausible : CorruptionMode::Implausible;
    return corrupt_with_retries(clean[(k / 2) % clean.size()], rules, c, k, kMaxCorruptionAttempts);
  });

  CorpusBuildStats st;
  st.requested = per_mode;
  std::vector<LabeledPair> out;
  out.reserve(2 * per_mode);
  for (std::size_t i = 0; i < per_mode; ++i) {
    const auto& p = outcomes[2 * i];
    const auto& q = outcomes[2 * i + 1];
    if (!p.corrupted() || !q.corrupted()) {
      ++st.dropped_pairs;
      continue;
    }
    out.push_back({p.pair, Label::Reliable, Origin::PlausibleRule});
    out.push_back({q.pair, Label::Unreliable, Origin::ImplausibleRule});
  }
  st.reliable = st.unreliable = out.size() / 2;
  if (stats) *stats = st;
  if (out.empty()) throw ValidationError("no corruptions generated");
  Rng::substream(seed, kShuffleStream).shuffle(out);
  return out;
}

void write_labeled_tsv(std::span<const LabeledPair> pairs, std::ostream& out) {
  for (const auto& p : pairs) {
    validate_pair(p.pair);
    out << p.pair.source << '\t' << p.pair.target << '\t' << to_string(p.label) << '\t' << to_string(p.origin)
        << '\n';
  }
  if (!out) throw std::runtime_error("failed to write labeled TSV");
}

std::vector<LabeledPair> parse_labeled_tsv(std::istream& in) {
  std::vector<LabeledPair> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    validate_utf8(line, offset);
    offset += line.size() + 1;
    if (labeled_field(line).empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find('\t', start)) != std::string::npos; start = pos + 1)
      cols.push_back(line.substr(start, pos - start));
    cols.push_back(labeled_field(std::string_view(line).substr(start)));
    if (cols.size() != 4) throw ParseError(line_no, "expected 4 columns (source, target, label, origin)");
    LabeledPair p;
    p.pair = {labeled_field(cols[0]), labeled_field(cols[1]), std::nullopt};
    if (cols[2] == "RELIABLE") p.label = Label::Reliable;
    else if (cols[2] == "UNRELIABLE") p.label = Label::Unreliable;
    else throw ParseError(line_no, "unknown label '" + cols[2] + "'");
    if (cols[3] == "HUMAN") p.origin = Origin::Human;
    else if (cols[3] == "PLAUSIBLE_RULE") p.origin = Origin::PlausibleRule;
    else if (cols[3] == "IMPLAUSIBLE_RULE") p.origin = Origin::ImplausibleRule;
    else throw ParseError(line_no, "unknown origin '" + cols[3] + "'");
    try {
      validate_pair(p.pair);
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

Dataset unlabeled(std::span<const LabeledPair> pairs, std::string provenance) {
  Dataset ds;
  ds.provenance = std::move(provenance);
  ds.pairs.reserve(pairs.size());
  for (const auto& p : pairs) ds.pairs.push_back(p.pair);
  return ds;
}

}  // namespace gecdq
