#include "gecdq/quality_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "gecdq/errors.hpp"

namespace gecdq {

namespace {

std::vector<double> normalized(std::span<const double> m) {
  double total = 0;
  for (double x : m) {
    if (!(x >= 0) || !std::isfinite(x)) throw ValidationError("distribution masses must be finite and >= 0");
    total += x;
  }
  std::vector<double> p(m.begin(), m.end());
  if (total > 0)
    for (double& x : p) x /= total;
  return p;
}

// Sum of a * log2(a / b) over a > 0.
double kl2(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0) s += a[i] * std::log2(a[i] / b[i]);
  return s;
}

bool has_mass(std::span<const double> m) {
  return std::any_of(m.begin(), m.end(), [](double x) { return x > 0; });
}

}  // namespace

double shannon_entropy(std::span<const double> masses) {
  double h = 0;
  for (double p : normalized(masses))
    if (p > 0) h -= p * std::log2(p);
  return h;
}

double shannon_entropy(const ErrorDistribution& dist) {
  if (dist.total_edits <= 0) return 0.0;
  return shannon_entropy(dist.mass);
}

double jsd(std::span<const double> p_raw, std::span<const double> q_raw) {
  if (p_raw.size() != q_raw.size()) throw ValidationError("distributions have different supports");
  if (!has_mass(p_raw) || !has_mass(q_raw)) throw ValidationError("JSD of an empty distribution");
  const auto p = normalized(p_raw);
  const auto q = normalized(q_raw);
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
  // Each half is computed separately and summed in a fixed order so that
  // jsd(p, q) and jsd(q, p) agree bit for bit.
  const double a = kl2(p, m);
  const double b = kl2(q, m);
  const double d = 0.5 * (std::min(a, b) + std::max(a, b));
  return std::clamp(d, 0.0, 1.0);
}

double jsd(const ErrorDistribution& p, const ErrorDistribution& q) {
  if (p.total_edits <= 0 || q.total_edits <= 0) throw ValidationError("JSD of an empty distribution");
  return jsd(p.mass, q.mass);
}

void to_json(nlohmann::json& j, const DiversityReport& r) {
  j = {{"original", r.original},
       {"reliable_only", r.reliable_only},
       {"entropy_original", r.entropy_original},
       {"entropy_reliable", r.entropy_reliable},
       {"other_share_original", r.other_share_original},
       {"other_share_reliable", r.other_share_reliable},
       {"shift_jsd", r.shift_jsd},
       {"typer_rule_version", kTyperRuleVersion}};
}

DiversityReport diversity_from(const ErrorDistribution& original, const ErrorDistribution& reliable_only) {
  DiversityReport r;
  r.original = original;
  r.reliable_only = reliable_only;
  r.entropy_original = shannon_entropy(original);
  r.entropy_reliable = shannon_entropy(reliable_only);
  r.other_share_original = other_share(original);
  r.other_share_reliable = other_share(reliable_only);
  if (original.total_edits > 0 && reliable_only.total_edits > 0) r.shift_jsd = jsd(original, reliable_only);
  return r;
}

DiversityReport diversity_report(const Dataset& dataset, const LinearModel& model, const EditAnalyzer& analyzer,
                                 const Executor& executor) {
  if (dataset.empty()) throw ValidationError("diversity report needs a non-empty dataset");
  const auto parts = partition(model, dataset, analyzer, executor);
  return diversity_from(distribution_of(dataset, analyzer, executor),
                        distribution_of(parts.reliable, analyzer, executor));
}

void to_json(nlohmann::json& j, const DistributionMatchReport& r) {
  nlohmann::json delta = nlohmann::json::object();
  for (auto t : all_error_types()) delta[std::string(to_string(t))] = r.delta(t);
  j = {{"jsd", r.jsd},
       {"per_type_delta", delta},
       {"dataset_a", r.dataset_a},
       {"dataset_b", r.dataset_b},
       {"typer_rule_version", kTyperRuleVersion}};
}

DistributionMatchReport distribution_match(const ErrorDistribution& a, const ErrorDistribution& b,
                                           std::string label_a, std::string label_b) {
  DistributionMatchReport r;
  r.jsd = jsd(a, b);
  for (std::size_t i = 0; i < kErrorTypeCount; ++i) r.per_type_delta[i] = a.mass[i] - b.mass[i];
  r.dataset_a = std::move(label_a);
  r.dataset_b = std::move(label_b);
  return r;
}

DistributionMatchReport distribution_match(const Dataset& a, const Dataset& b, const EditAnalyzer& analyzer,
                                           const Executor& executor) {
  const auto da = distribution_of(a, analyzer, executor);
  const auto db = distribution_of(b, analyzer, executor);
  if (da.total_edits == 0 || db.total_edits == 0)
    throw ValidationError("distribution match needs edits on both sides (got " + std::to_string(da.total_edits) +
                          " and " + std::to_string(db.total_edits) + ")");
  return distribution_match(da, db, a.provenance, b.provenance);
}

void to_json(nlohmann::json& j, const ScorerResult& r) {
  j = {{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"beta", r.beta},
       {"precision", r.precision}, {"recall", r.recall}, {"f05", r.f05}};
}

double f_beta_from_pr(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * precision + recall;
  return denom > 0 ? (1 + b2) * precision * recall / denom : 0.0;
}

ScorerResult f_beta(long long tp, long long fp, long long fn, double beta) {
  if (tp < 0 || fp < 0 || fn < 0) throw ValidationError("counts must be non-negative");
  ScorerResult r{tp, fp, fn, beta, 0, 0, 0};
  if (tp + fp > 0) r.precision = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) r.recall = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f05 = f_beta_from_pr(r.precision, r.recall, beta);
  return r;
}

ScorerResult edit_level_score(const Dataset& hypothesis, const std::vector<M2Record>& gold,
                              const EditAnalyzer& analyzer, int annotator, const Executor& executor) {
  if (hypothesis.size() != gold.size())
    throw ValidationError("hypothesis has " + std::to_string(hypothesis.size()) + " sentences, gold has " +
                          std::to_string(gold.size()));
  struct Counts {
    long long tp = 0, fp = 0, fn = 0;
  };
  using Key = std::tuple<int, int, std::string>;
  const auto per_sentence = executor.map<Counts>(gold.size(), [&](std::size_t i) {
    const auto& rec = gold[i];
    std::vector<Token> src;
    for (std::size_t k = 0; k < rec.source_tokens.size(); ++k)
      src.push_back({rec.source_tokens[k], to_lower(rec.source_tokens[k]), PosTag::Other, static_cast<int>(k)});
    const auto hyp = tokenize(hypothesis.pairs[i].target);
    const auto script = align(src, hyp, analyzer.costs(), &analyzer.resources().verbs);

    std::vector<Key> wanted;
    for (const auto& a : rec.annotations)
      if (!a.is_noop() && a.annotator == annotator) wanted.emplace_back(a.start, a.end, a.correction);
    std::sort(wanted.begin(), wanted.end());
    std::vector<bool> used(wanted.size(), false);

    Counts c;
    for (const auto& e : script.edits) {
      const Key key{e.src_start, e.src_end, join(e.tgt_tokens)};
      const auto range = std::equal_range(wanted.begin(), wanted.end(), key);
      auto hit = std::find_if(range.first, range.second,
                              [&](const Key& k) { return !used[static_cast<std::size_t>(&k - wanted.data())]; });
      if (hit != range.second) {
        used[static_cast<std::size_t>(hit - wanted.begin())] = true;
        ++c.tp;
      } else {
        ++c.fp;
      }
    }
    c.fn = static_cast<long long>(std::count(used.begin(), used.end(), false));
    return c;
  });
  Counts total;
  for (const auto& c : per_sentence) {
    total.tp += c.tp;
    total.fp += c.fp;
    total.fn += c.fn;
  }
  return f_beta(total.tp, total.fp, total.fn, 0.5);
}

}  // namespace gecdq
