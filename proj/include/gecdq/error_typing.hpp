#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gecdq/corpus_io.hpp"
#include "gecdq/edit_extraction.hpp"
#include "gecdq/parallel.hpp"
#include "gecdq/text_analysis.hpp"
#include "json.hpp"

namespace gecdq {

/// The 23 bare error labels, in reporting order.
enum class ErrorType : unsigned char {
  Other, Adv, Prep, Orth, Noun, Morph, Det, Pron, VerbSva, Part, Verb, VerbTense,
  VerbForm, Spell, Conj, Adj, Wo, Punct, NounNum, AdjForm, Contr, NounPos, NounInfl,
};

inline constexpr std::size_t kErrorTypeCount = 23;

/// Bumped whenever the rule cascade changes; stamped into every report.
inline constexpr std::string_view kTyperRuleVersion = "typer-1";

constexpr std::size_t index_of(ErrorType t) noexcept { return static_cast<std::size_t>(t); }
std::string_view to_string(ErrorType t) noexcept;
std::optional<ErrorType> parse_error_type(std::string_view label) noexcept;
const std::array<ErrorType, kErrorTypeCount>& all_error_types() noexcept;

struct TypedEdit {
  Edit edit;
  ErrorType type = ErrorType::Other;
};

/// Rule cascade; the first matching rule wins.
ErrorType classify_edit(const Edit& edit, std::span<const Token> source, std::span<const Token> target,
                        const LanguageResources& resources);

/// A tokenized, tagged and aligned sentence pair with one type per edit.
struct AnalyzedPair {
  std::vector<Token> source;
  std::vector<Token> target;
  EditScript script;
  std::vector<ErrorType> types;
};

/// tokenize -> pos_tag -> align -> classify_edit, bound to one set of resources.
class EditAnalyzer {
 public:
  explicit EditAnalyzer(const LanguageResources& resources, AlignCosts costs = {})
      : resources_(&resources), costs_(costs) {}

  AnalyzedPair analyze(std::string_view source, std::string_view target) const;
  AnalyzedPair analyze(const SentencePair& pair) const { return analyze(pair.source, pair.target); }
  std::vector<TypedEdit> typed_edits(const SentencePair& pair) const;

  const LanguageResources& resources() const noexcept { return *resources_; }
  const AlignCosts& costs() const noexcept { return costs_; }

 private:
  const LanguageResources* resources_;
  AlignCosts costs_;
};

/// Raw per-type edit counts; addition is the deterministic merge.
struct ErrorCounts {
  std::array<long long, kErrorTypeCount> counts{};

  void add(ErrorType t, long long n = 1) noexcept { counts[index_of(t)] += n; }
  long long total() const noexcept;
  ErrorCounts& operator+=(const ErrorCounts& other) noexcept;
};

/// Percentage mass per type. All 23 entries are always present.
struct ErrorDistribution {
  std::array<double, kErrorTypeCount> mass{};
  long long total_edits = 0;

  double operator[](ErrorType t) const noexcept { return mass[index_of(t)]; }
  double sum() const noexcept;

  static ErrorDistribution from_counts(const ErrorCounts& counts);
  /// For published or externally computed columns; no normalisation applied.
  static ErrorDistribution from_percentages(const std::array<double, kErrorTypeCount>& mass,
                                            long long total_edits);

  static constexpr std::string_view kind = "error_distribution";
};

void to_json(nlohmann::json& j, const ErrorDistribution& d);
void from_json(const nlohmann::json& j, ErrorDistribution& d);

ErrorCounts count_error_types(const Dataset& dataset, const EditAnalyzer& analyzer,
                              const Executor& executor = Executor{});
ErrorDistribution distribution_of(const Dataset& dataset, const EditAnalyzer& analyzer,
                                  const Executor& executor = Executor{});

/// Share of OTHER, the diversity proxy used in prior work.
double other_share(const ErrorDistribution& dist) noexcept;

}  // namespace gecdq
