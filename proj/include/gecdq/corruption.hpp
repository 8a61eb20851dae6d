#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "gecdq/corpus_io.hpp"
#include "gecdq/parallel.hpp"
#include "gecdq/rng.hpp"
#include "gecdq/text_analysis.hpp"
#include "json.hpp"

namespace gecdq {

enum class CorruptionMode { Plausible, Implausible };
enum class CorruptionRule { Verb, Replace, Insert, Delete };
inline constexpr std::size_t kCorruptionRuleCount = 4;

std::string_view to_string(CorruptionMode m) noexcept;
std::string_view to_string(CorruptionRule r) noexcept;
std::optional<CorruptionMode> parse_corruption_mode(std::string_view s) noexcept;
std::optional<CorruptionRule> parse_corruption_rule(std::string_view s) noexcept;

struct CorruptionConfig {
  CorruptionMode mode = CorruptionMode::Plausible;
  double per_token_error_prob = 0.15;
  int max_errors_per_sentence = 4;
  /// Indexed by CorruptionRule.
  std::array<double, kCorruptionRuleCount> rule_weights{1.0, 1.0, 1.0, 1.0};
  std::uint64_t seed = 0;

  double weight(CorruptionRule r) const noexcept { return rule_weights[static_cast<std::size_t>(r)]; }
  /// Throws ValidationError on out-of-range values.
  void validate() const;
};

void to_json(nlohmann::json& j, const CorruptionConfig& c);

/// The four corruption lexicons. All must be non-empty.
class CorruptionRuleSet {
 public:
  CorruptionRuleSet(std::vector<VerbFormGroup> verb_groups, std::vector<ConfusionPair> confusions,
                    std::vector<std::string> insertions, std::vector<std::string> deletions);

  const FormLexicon& verbs() const noexcept { return verbs_; }
  const ConfusionLexicon& confusions() const noexcept { return confusions_; }
  const std::vector<std::string>& insertions() const noexcept { return insertions_; }
  const std::vector<std::string>& deletions() const noexcept { return deletions_; }
  bool is_insertion_word(std::string_view lower) const { return insertion_set_.contains(std::string(lower)); }
  bool is_deletion_word(std::string_view lower) const { return deletion_set_.contains(std::string(lower)); }

 private:
  FormLexicon verbs_;
  ConfusionLexicon confusions_;
  std::vector<std::string> insertions_;
  std::vector<std::string> deletions_;
  std::unordered_set<std::string> insertion_set_;
  std::unordered_set<std::string> deletion_set_;
};

/// One fired site. `replacement` is empty for deletions; for insertions the
/// original token is kept after the inserted word.
struct SiteMutation {
  CorruptionRule rule;
  int token_index = 0;
  std::string original;
  std::vector<std::string> replacement;
};

struct CorruptionOutcome {
  /// source = corrupted text, target = the original sentence (tokenized, space-joined).
  SentencePair pair;
  std::vector<SiteMutation> mutations;

  /// False is the "no corruption applied" outcome; pair.source == pair.target then.
  bool corrupted() const noexcept { return !mutations.empty(); }
};

/// Replacement tokens for one site, or nullopt when the rule does not apply.
std::optional<std::vector<std::string>> apply_rule(CorruptionRule rule, CorruptionMode mode, const Token& token,
                                                   const CorruptionRuleSet& rules, Rng& rng);

CorruptionOutcome corrupt(std::string_view sentence, const CorruptionRuleSet& rules, const CorruptionConfig& config,
                          Rng& rng);

/// Corrupts `sentence` with substreams (seed, index, attempt) for attempt < max_attempts.
CorruptionOutcome corrupt_with_retries(std::string_view sentence, const CorruptionRuleSet& rules,
                                       const CorruptionConfig& config, std::uint64_t index, int max_attempts = 10);

// ---------------------------------------------------------------------------
// Labeled corpora

enum class Label { Reliable, Unreliable };
enum class Origin { Human, PlausibleRule, ImplausibleRule };

std::string_view to_string(Label l) noexcept;
std::string_view to_string(Origin o) noexcept;

struct LabeledPair {
  SentencePair pair;
  Label label = Label::Reliable;
  Origin origin = Origin::Human;

  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

struct CorpusBuildStats {
  std::size_t requested = 0;
  std::size_t reliable = 0;
  std::size_t unreliable = 0;
  std::size_t dropped_pairs = 0;      // matched drops after exhausting attempts
  std::size_t resampled_sentences = 0;  // clean sentences drawn with replacement
};

void to_json(nlohmann::json& j, const CorpusBuildStats& s);

inline constexpr int kMaxCorruptionAttempts = 10;

/// 1:1 mix of human positives (RELIABLE) and implausibly corrupted clean
/// sentences (UNRELIABLE), shuffled by `seed`. `config.mode` is ignored.
/// With fewer clean sentences than positives, `allow_resample` draws with
/// replacement; otherwise it is an error.
std::vector<LabeledPair> build_classifier_corpus(const Dataset& positives, std::span<const std::string> clean_sentences,
                                                 const CorruptionRuleSet& rules, CorruptionConfig config,
                                                 std::uint64_t seed, bool allow_resample = false,
                                                 CorpusBuildStats* stats = nullptr,
                                                 const Executor& executor = Executor{});

/// `per_mode` PLAUSIBLE (RELIABLE) and `per_mode` IMPLAUSIBLE (UNRELIABLE)
/// corruptions of the clean sentences, cycled in order, shuffled by `seed`.
std::vector<LabeledPair> build_contrast_corpus(std::span<const std::string> clean_sentences, std::size_t per_mode,
                                               const CorruptionRuleSet& rules, CorruptionConfig config,
                                               std::uint64_t seed, CorpusBuildStats* stats = nullptr,
                                               const Executor& executor = Executor{});

/// source TAB target TAB label TAB origin.
void write_labeled_tsv(std::span<const LabeledPair> pairs, std::ostream& out);
std::vector<LabeledPair> parse_labeled_tsv(std::istream& in);

Dataset unlabeled(std::span<const LabeledPair> pairs, std::string provenance = {});

}  // namespace gecdq
