#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gecdq/corpus_io.hpp"
#include "gecdq/corruption.hpp"
#include "gecdq/error_typing.hpp"
#include "gecdq/parallel.hpp"
#include "json.hpp"

namespace gecdq {

inline constexpr std::string_view kFeatureSchemaVersion = "fs1";
inline constexpr std::uint32_t kFeatureDim = 1u << 18;

/// Fixed feature slots of fs1. Hashed bag features occupy [kFixedFeatureCount, D).
namespace fs1 {
inline constexpr std::uint32_t kTypeCounts = 0;  // 23 slots, one per ErrorType
inline constexpr std::uint32_t kEditCount = 23;
inline constexpr std::uint32_t kEditedFraction = 24;
inline constexpr std::uint32_t kMeanWidth = 25;
inline constexpr std::uint32_t kMaxWidth = 26;
inline constexpr std::uint32_t kOovIntroduced = 27;
inline constexpr std::uint32_t kNoSharedBigram = 28;
inline constexpr std::uint32_t kCharLengthDelta = 29;
inline constexpr std::uint32_t kFixedFeatureCount = 30;

inline constexpr double kTypeCountCap = 4;
inline constexpr double kEditCountCap = 8;
inline constexpr double kWidthCap = 6;
inline constexpr double kOovCap = 4;
inline constexpr double kNoSharedBigramCap = 4;
inline constexpr double kCharLengthDeltaCap = 40;
}  // namespace fs1

/// Sparse vector; indices strictly increasing, values in [0, 1].
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  double dot(std::span<const double> w) const noexcept;
  double dot(std::span<const float> w) const noexcept;
  double value(std::uint32_t index) const noexcept;
};

/// Uncapped feature values, before scaling and hashing.
struct RawFeatures {
  std::array<int, kErrorTypeCount> type_counts{};
  int n_edits = 0;
  double edited_token_fraction = 0;
  double mean_width = 0;
  int max_width = 0;
  int oov_introduced = 0;
  int no_shared_bigram = 0;
  int char_length_delta = 0;
  std::vector<std::string> bag;  // "TYPE|s|token" or "TYPE|t|token"
};

/// True when the two words have no character bigram in common.
bool shares_no_bigram(std::string_view a, std::string_view b);

RawFeatures raw_features(const SentencePair& pair, const AnalyzedPair& analyzed, const LanguageResources& resources);
FeatureVector encode(const RawFeatures& raw, std::uint32_t dim = kFeatureDim);
FeatureVector featurize(const SentencePair& pair, const EditAnalyzer& analyzer, std::uint32_t dim = kFeatureDim);

struct TrainingMeta {
  std::uint64_t seed = 0;
  int epochs = 0;
  std::uint64_t examples_seen = 0;
  double learning_rate = 0;
  double l2 = 0;
};

struct LinearModel {
  std::vector<float> weights;
  double bias = 0;
  double threshold = 0.5;
  std::string feature_schema_version{kFeatureSchemaVersion};
  TrainingMeta training_meta;

  std::uint32_t dim() const noexcept { return static_cast<std::uint32_t>(weights.size()); }
  static LinearModel zero(std::uint32_t dim = kFeatureDim);
};

struct TrainConfig {
  int epochs = 10;
  double learning_rate = 0.1;
  double l2 = 1e-6;
  std::uint64_t seed = 0;
  double threshold = 0.5;
};

/// One training example: features and y = 1 for RELIABLE.
struct Example {
  FeatureVector x;
  int y = 0;
};

/// Mean log-loss plus (l2 / 2) |w|^2. Fills the gradient when the pointers are set.
double objective(std::span<const double> w, double b, std::span<const Example> data, double l2,
                 std::vector<double>* grad_w = nullptr, double* grad_b = nullptr);

/// SGD on `objective` over seed-shuffled epochs, single-threaded.
LinearModel train_examples(std::span<const Example> data, std::uint32_t dim, const TrainConfig& config);
std::vector<Example> make_examples(std::span<const LabeledPair> corpus, const EditAnalyzer& analyzer,
                                   const Executor& executor = Executor{}, std::uint32_t dim = kFeatureDim);
LinearModel train(std::span<const LabeledPair> corpus, const EditAnalyzer& analyzer, const TrainConfig& config,
                  const Executor& executor = Executor{});

double logistic(double z) noexcept;

struct Prediction {
  double probability_reliable = 0.5;
  Label label = Label::Reliable;
};

Prediction predict(const LinearModel& model, const FeatureVector& x);
/// Throws ValidationError when the model's schema or dimension differ from the featurizer's.
Prediction predict(const LinearModel& model, const SentencePair& pair, const EditAnalyzer& analyzer);
void check_schema(const LinearModel& model);
double accuracy(const LinearModel& model, std::span<const Example> data);

struct ReliabilityReport {
  std::string dataset_provenance;
  std::size_t n_pairs = 0;
  std::size_t n_reliable = 0;
  double reliability_metric = 0;
  std::string model_id;

  static constexpr std::string_view kind = "reliability";
};

void to_json(nlohmann::json& j, const ReliabilityReport& r);

std::vector<Prediction> predict_all(const LinearModel& model, const Dataset& dataset, const EditAnalyzer& analyzer,
                                    const Executor& executor = Executor{});
ReliabilityReport score_dataset(const LinearModel& model, const Dataset& dataset, const EditAnalyzer& analyzer,
                                const Executor& executor = Executor{});

struct Partition {
  Dataset reliable;
  Dataset unreliable;
};

Partition partition(const LinearModel& model, const Dataset& dataset, const EditAnalyzer& analyzer,
                    const Executor& executor = Executor{});

/// Canonical serialization: compact JSON with sorted keys.
std::string canonical_model_bytes(const LinearModel& model);
/// SHA-256 of the canonical bytes.
std::string model_id(const LinearModel& model);
void save_model(const LinearModel& model, std::ostream& out);
LinearModel load_model(std::istream& in);

}  // namespace gecdq
