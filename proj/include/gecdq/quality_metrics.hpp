#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gecdq/classifier.hpp"
#include "gecdq/corpus_io.hpp"
#include "gecdq/error_typing.hpp"
#include "gecdq/parallel.hpp"
#include "json.hpp"

namespace gecdq {

/// Shannon entropy in bits of the renormalized masses; 0 for an empty distribution.
double shannon_entropy(const ErrorDistribution& dist);
double shannon_entropy(std::span<const double> masses);

/// Base-2 Jensen-Shannon divergence of the renormalized inputs, in [0, 1].
/// Throws ValidationError if either side has no mass.
double jsd(std::span<const double> p, std::span<const double> q);
/// Also throws when either distribution has total_edits == 0.
double jsd(const ErrorDistribution& p, const ErrorDistribution& q);

struct DiversityReport {
  ErrorDistribution original;
  ErrorDistribution reliable_only;
  double entropy_original = 0;
  double entropy_reliable = 0;
  double other_share_original = 0;
  double other_share_reliable = 0;
  /// 0 when either side is empty.
  double shift_jsd = 0;

  static constexpr std::string_view kind = "diversity";
};

void to_json(nlohmann::json& j, const DiversityReport& r);

DiversityReport diversity_from(const ErrorDistribution& original, const ErrorDistribution& reliable_only);
DiversityReport diversity_report(const Dataset& dataset, const LinearModel& model, const EditAnalyzer& analyzer,
                                 const Executor& executor = Executor{});

struct DistributionMatchReport {
  double jsd = 0;
  /// a - b in percentage points.
  std::array<double, kErrorTypeCount> per_type_delta{};
  std::string dataset_a;
  std::string dataset_b;

  double delta(ErrorType t) const noexcept { return per_type_delta[index_of(t)]; }
  static constexpr std::string_view kind = "distribution_match";
};

void to_json(nlohmann::json& j, const DistributionMatchReport& r);

DistributionMatchReport distribution_match(const ErrorDistribution& a, const ErrorDistribution& b,
                                           std::string label_a = {}, std::string label_b = {});
DistributionMatchReport distribution_match(const Dataset& a, const Dataset& b, const EditAnalyzer& analyzer,
                                           const Executor& executor = Executor{});

struct ScorerResult {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  double beta = 0.5;
  double precision = 0;
  double recall = 0;
  double f05 = 0;  // F-beta for `beta`; 0.5 unless asked otherwise

  static constexpr std::string_view kind = "scorer";
};

void to_json(nlohmann::json& j, const ScorerResult& r);

/// F-beta from percentages; 0 when the denominator is 0.
double f_beta_from_pr(double precision, double recall, double beta = 0.5);
ScorerResult f_beta(long long tp, long long fp, long long fn, double beta = 0.5);

/// Exact (span, correction) matching of hypothesis edits against one gold annotator.
ScorerResult edit_level_score(const Dataset& hypothesis, const std::vector<M2Record>& gold,
                              const EditAnalyzer& analyzer, int annotator = 0, const Executor& executor = Executor{});

}  // namespace gecdq
