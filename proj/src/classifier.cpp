#include "gecdq/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <iterator>
#include <numeric>
#include <unordered_set>

#include "gecdq/errors.hpp"
#include "gecdq/hashing.hpp"
#include "gecdq/rng.hpp"

namespace gecdq {

namespace {

constexpr std::string_view kWeightsEncoding = "base64-le-f32";

bool alphabetic(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
  });
}

double capped(double x, double cap) { return std::min(x / cap, 1.0); }

// log(1 + e^a) without overflow.
double softplus(double a) { return a > 0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a)); }

double log_loss(double z, int y) { return y ? softplus(-z) : softplus(z); }

std::string encode_weights(const std::vector<float>& w) {
  std::vector<unsigned char> bytes;
  bytes.reserve(4 * w.size());
  for (float f : w) {
    const auto u = std::bit_cast<std::uint32_t>(f);
    for (int k = 0; k < 4; ++k) bytes.push_back(static_cast<unsigned char>(u >> (8 * k)));
  }
  return base64_encode(bytes);
}

std::vector<float> decode_weights(std::string_view text, std::size_t dim) {
  const auto bytes = base64_decode(text);
  if (bytes.size() != 4 * dim)
    throw ValidationError("model has " + std::to_string(bytes.size() / 4) + " weights, header says D=" +
                          std::to_string(dim));
  std::vector<float> w(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::uint32_t u = 0;
    for (int k = 0; k < 4; ++k) u |= static_cast<std::uint32_t>(bytes[4 * i + k]) << (8 * k);
    w[i] = std::bit_cast<float>(u);
  }
  return w;
}

}  // namespace

double FeatureVector::dot(std::span<const double> w) const noexcept {
  double s = 0;
  for (const auto& [i, v] : entries) s += w[i] * v;
  return s;
}

double FeatureVector::dot(std::span<const float> w) const noexcept {
  double s = 0;
  for (const auto& [i, v] : entries) s += static_cast<double>(w[i]) * v;
  return s;
}

double FeatureVector::value(std::uint32_t index) const noexcept {
  const auto it = std::lower_bound(entries.begin(), entries.end(), index,
                                   [](const auto& e, std::uint32_t i) { return e.first < i; });
  return it != entries.end() && it->first == index ? it->second : 0.0;
}

bool shares_no_bigram(std::string_view a, std::string_view b) {
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    for (std::size_t j = 0; j + 1 < b.size(); ++j)
      if (a[i] == b[j] && a[i + 1] == b[j + 1]) return false;
  return true;
}

RawFeatures raw_features(const SentencePair& pair, const AnalyzedPair& a, const LanguageResources& res) {
  RawFeatures f;
  const auto stats = edit_count_stats(a.script);
  f.n_edits = stats.n_edits;
  f.edited_token_fraction = stats.edited_token_fraction;
  f.char_length_delta = static_cast<int>(
      std::abs(static_cast<long long>(pair.source.size()) - static_cast<long long>(pair.target.size())));

  std::unordered_set<std::string_view> target_words;
  for (const auto& t : a.target) target_words.insert(t.lower);

  int width_sum = 0;
  for (std::size_t k = 0; k < a.script.edits.size(); ++k) {
    const auto& e = a.script.edits[k];
    const auto type = a.types[k];
    ++f.type_counts[index_of(type)];
    const int width = std::max(e.src_end - e.src_start, e.tgt_end - e.tgt_start);
    width_sum += width;
    f.max_width = std::max(f.max_width, width);

    for (int i = e.src_start; i < e.src_end; ++i) {
      const auto& w = a.source[i].lower;
      if (alphabetic(w) && !res.in_dictionary(w) && !target_words.contains(w)) ++f.oov_introduced;
    }
    const bool unrelated = std::any_of(e.substitutions.begin(), e.substitutions.end(), [&](auto col) {
      const auto& s = a.source[col.first].lower;
      const auto& t = a.target[col.second].lower;
      return s.size() >= 3 && t.size() >= 3 && alphabetic(s) && alphabetic(t) && shares_no_bigram(s, t);
    });
    if (unrelated) ++f.no_shared_bigram;

    const std::string label(to_string(type));
    if (e.src_start < e.src_end) {
      for (int i = e.src_start; i < e.src_end; ++i) f.bag.push_back(label + "|s|" + a.source[i].lower);
    } else {
      for (int j = e.tgt_start; j < e.tgt_end; ++j) f.bag.push_back(label + "|t|" + a.target[j].lower);
    }
  }
  if (f.n_edits > 0) f.mean_width = static_cast<double>(width_sum) / f.n_edits;
  return f;
}

FeatureVector encode(const RawFeatures& raw, std::uint32_t dim) {
  if (dim <= fs1::kFixedFeatureCount) throw ValidationError("feature dimension too small");
  FeatureVector fv;
  auto put = [&](std::uint32_t i, double v) {
    if (v != 0) fv.entries.emplace_back(i, v);
  };
  for (std::size_t t = 0; t < kErrorTypeCount; ++t)
    put(fs1::kTypeCounts + static_cast<std::uint32_t>(t), capped(raw.type_counts[t], fs1::kTypeCountCap));
  put(fs1::kEditCount, capped(raw.n_edits, fs1::kEditCountCap));
  put(fs1::kEditedFraction, std::clamp(raw.edited_token_fraction, 0.0, 1.0));
  put(fs1::kMeanWidth, capped(raw.mean_width, fs1::kWidthCap));
  put(fs1::kMaxWidth, capped(raw.max_width, fs1::kWidthCap));
  put(fs1::kOovIntroduced, capped(raw.oov_introduced, fs1::kOovCap));
  put(fs1::kNoSharedBigram, capped(raw.no_shared_bigram, fs1::kNoSharedBigramCap));
  put(fs1::kCharLengthDelta, capped(raw.char_length_delta, fs1::kCharLengthDeltaCap));

  // Bag features are presence indicators; collisions collapse to one slot.
  const std::uint32_t buckets = dim - fs1::kFixedFeatureCount;
  std::vector<std::uint32_t> hashed;
  hashed.reserve(raw.bag.size());
  for (const auto& key : raw.bag)
    hashed.push_back(fs1::kFixedFeatureCount + static_cast<std::uint32_t>(fnv1a64(key) % buckets));
  std::sort(hashed.begin(), hashed.end());
  hashed.erase(std::unique(hashed.begin(), hashed.end()), hashed.end());
  for (auto i : hashed) fv.entries.emplace_back(i, 1.0);
  return fv;
}

FeatureVector featurize(const SentencePair& pair, const EditAnalyzer& analyzer, std::uint32_t dim) {
  return encode(raw_features(pair, analyzer.analyze(pair), analyzer.resources()), dim);
}

LinearModel LinearModel::zero(std::uint32_t dim) {
  LinearModel m;
  m.weights.assign(dim, 0.0f);
  return m;
}

double logistic(double z) noexcept {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double objective(std::span<const double> w, double b, std::span<const Example> data, double l2,
                 std::vector<double>* grad_w, double* grad_b) {
  if (grad_w) grad_w->assign(w.size(), 0.0);
  if (grad_b) *grad_b = 0.0;
  const double n = static_cast<double>(std::max<std::size_t>(data.size(), 1));
  double loss = 0;
  for (const auto& ex : data) {
    const double z = ex.x.dot(w) + b;
    loss += log_loss(z, ex.y);
    const double g = (logistic(z) - ex.y) / n;
    if (grad_w)
      for (const auto& [i, v] : ex.x.entries) (*grad_w)[i] += g * v;
    if (grad_b) *grad_b += g;
  }
  double norm2 = 0;
  for (double x : w) norm2 += x * x;
  if (grad_w)
    for (std::size_t i = 0; i < w.size(); ++i) (*grad_w)[i] += l2 * w[i];
  return loss / n + 0.5 * l2 * norm2;
}

LinearModel train_examples(std::span<const Example> data, std::uint32_t dim, const TrainConfig& config) {
  const auto positives = std::count_if(data.begin(), data.end(), [](const Example& e) { return e.y == 1; });
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(data.size()))
    throw ValidationError("single-class corpus: " + std::to_string(positives) + " RELIABLE of " +
                          std::to_string(data.size()));
  if (config.epochs < 1) throw ValidationError("epochs must be >= 1");
  if (!(config.learning_rate > 0)) throw ValidationError("learning_rate must be positive");
  if (!(config.l2 >= 0)) throw ValidationError("l2 must be non-negative");
  if (!(config.threshold > 0 && config.threshold < 1)) throw ValidationError("threshold must be in (0, 1)");

  // w = scale * v, so the L2 shrink is O(1) per step instead of O(D).
  std::vector<double> v(dim, 0.0);
  double scale = 1.0;
  double b = 0.0;
  std::uint64_t t = 0;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng::substream(config.seed, static_cast<std::uint64_t>(epoch)).shuffle(order);
    double loss = 0;
    for (std::size_t idx : order) {
      const auto& ex = data[idx];
      const double eta = config.learning_rate / (1.0 + config.learning_rate * config.l2 * static_cast<double>(t));
      const double z = scale * ex.x.dot(v) + b;
      loss += log_loss(z, ex.y);
      const double g = logistic(z) - ex.y;
      scale *= 1.0 - eta * config.l2;
      if (scale < 1e-9) {
        for (double& x : v) x *= scale;
        scale = 1.0;
      }
      for (const auto& [i, val] : ex.x.entries) v[i] -= eta * g * val / scale;
      b -= eta * g;
      ++t;
    }
    if (!std::isfinite(loss) || !std::isfinite(b))
      throw ValidationError("non-finite loss in epoch " + std::to_string(epoch + 1));
  }

  LinearModel m;
  m.weights.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) m.weights[i] = static_cast<float>(v[i] * scale);
  m.bias = b;
  m.threshold = config.threshold;
  m.training_meta = {config.seed, config.epochs, t, config.learning_rate, config.l2};
  return m;
}

std::vector<Example> make_examples(std::span<const LabeledPair> corpus, const EditAnalyzer& analyzer,
                                   const Executor& executor, std::uint32_t dim) {
  return executor.map<Example>(corpus.size(), [&](std::size_t i) {
    return Example{featurize(corpus[i].pair, analyzer, dim), corpus[i].label == Label::Reliable ? 1 : 0};
  });
}

LinearModel train(std::span<const LabeledPair> corpus, const EditAnalyzer& analyzer, const TrainConfig& config,
                  const Executor& executor) {
  const auto examples = make_examples(corpus, analyzer, executor);
  return train_examples(examples, kFeatureDim, config);
}

Prediction predict(const LinearModel& model, const FeatureVector& x) {
  const double p = logistic(x.dot(std::span<const float>(model.weights)) + model.bias);
  return {p, p >= model.threshold ? Label::Reliable : Label::Unreliable};
}

void check_schema(const LinearModel& model) {
  if (model.feature_schema_version != kFeatureSchemaVersion)
    throw ValidationError("feature schema mismatch: model uses '" + model.feature_schema_version +
                          "', featurizer is '" + std::string(kFeatureSchemaVersion) + "'");
  if (model.dim() != kFeatureDim)
    throw ValidationError("model dimension " + std::to_string(model.dim()) + " does not match " +
                          std::to_string(kFeatureDim));
}

Prediction predict(const LinearModel& model, const SentencePair& pair, const EditAnalyzer& analyzer) {
  check_schema(model);
  return predict(model, featurize(pair, analyzer));
}

double accuracy(const LinearModel& model, std::span<const Example> data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : data)
    if ((predict(model, ex.x).label == Label::Reliable) == (ex.y == 1)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

void to_json(nlohmann::json& j, const ReliabilityReport& r) {
  j = {{"dataset_provenance", r.dataset_provenance},
       {"n_pairs", r.n_pairs},
       {"n_reliable", r.n_reliable},
       {"reliability_metric", r.reliability_metric},
       {"model_id", r.model_id},
       {"feature_schema_version", kFeatureSchemaVersion},
       {"typer_rule_version", kTyperRuleVersion}};
}

std::vector<Prediction> predict_all(const LinearModel& model, const Dataset& dataset, const EditAnalyzer& analyzer,
                                    const Executor& executor) {
  check_schema(model);
  return executor.map<Prediction>(dataset.size(), [&](std::size_t i) {
    return predict(model, featurize(dataset.pairs[i], analyzer));
  });
}

ReliabilityReport score_dataset(const LinearModel& model, const Dataset& dataset, const EditAnalyzer& analyzer,
                                const Executor& executor) {
  if (dataset.empty()) throw ValidationError("cannot score an empty dataset");
  const auto predictions = predict_all(model, dataset, analyzer, executor);
  ReliabilityReport r;
  r.dataset_provenance = dataset.provenance;
  r.n_pairs = dataset.size();
  r.n_reliable = static_cast<std::size_t>(std::count_if(
      predictions.begin(), predictions.end(), [](const Prediction& p) { return p.label == Label::Reliable; }));
  r.reliability_metric = 100.0 * static_cast<double>(r.n_reliable) / static_cast<double>(r.n_pairs);
  r.model_id = model_id(model);
  return r;
}

Partition partition(const LinearModel& model, const Dataset& dataset, const EditAnalyzer& analyzer,
                    const Executor& executor) {
  const auto predictions = predict_all(model, dataset, analyzer, executor);
  Partition out;
  out.reliable.provenance = dataset.provenance;
  out.unreliable.provenance = dataset.provenance;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    (predictions[i].label == Label::Reliable ? out.reliable : out.unreliable).pairs.push_back(dataset.pairs[i]);
  return out;
}

std::string canonical_model_bytes(const LinearModel& m) {
  nlohmann::json j;
  j["feature_schema_version"] = m.feature_schema_version;
  j["D"] = m.dim();
  j["threshold"] = m.threshold;
  j["bias"] = m.bias;
  j["training_meta"] = {{"seed", m.training_meta.seed},
                        {"epochs", m.training_meta.epochs},
                        {"examples_seen", m.training_meta.examples_seen},
                        {"learning_rate", m.training_meta.learning_rate},
                        {"l2", m.training_meta.l2}};
  j["weights_encoding"] = kWeightsEncoding;
  j["weights"] = encode_weights(m.weights);
  return j.dump();
}

std::string model_id(const LinearModel& model) { return sha256_hex(canonical_model_bytes(model)); }

void save_model(const LinearModel& model, std::ostream& out) {
  out << canonical_model_bytes(model) << '\n';
  if (!out) throw std::runtime_error("failed to write model");
}

LinearModel load_model(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("model is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("weights_encoding").get<std::string>() != kWeightsEncoding)
      throw ValidationError("unsupported weights_encoding '" + j.at("weights_encoding").get<std::string>() + "'");
    LinearModel m;
    m.feature_schema_version = j.at("feature_schema_version").get<std::string>();
    m.threshold = j.at("threshold").get<double>();
    m.bias = j.at("bias").get<double>();
    const auto& meta = j.at("training_meta");
    m.training_meta = {meta.at("seed").get<std::uint64_t>(), meta.at("epochs").get<int>(),
                       meta.at("examples_seen").get<std::uint64_t>(), meta.at("learning_rate").get<double>(),
                       meta.at("l2").get<double>()};
    m.weights = decode_weights(j.at("weights").get<std::string>(), j.at("D").get<std::size_t>());
    if (!(m.threshold > 0 && m.threshold < 1)) throw ValidationError("threshold must be in (0, 1)");
    if (!std::isfinite(m.bias) || !std::all_of(m.weights.begin(), m.weights.end(), [](float w) {
          return std::isfinite(w);
        }))
      throw ValidationError("model contains non-finite parameters");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace gecdq
