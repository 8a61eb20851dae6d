#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gecdq/corruption.hpp"
#include "gecdq/errors.hpp"
#include "test_support.hpp"

using namespace gecdq;

namespace {

Token tok(std::string_view w) { return tokenize(w).front(); }

CorruptionConfig only(CorruptionRule r, CorruptionMode m) {
  CorruptionConfig c;
  c.mode = m;
  c.rule_weights = {0, 0, 0, 0};
  c.rule_weights[static_cast<std::size_t>(r)] = 1;
  return c;
}

}  // namespace

TEST_CASE("rule set requires every lexicon") {
  std::vector<VerbFormGroup> verbs = {{"walk", {"walk", "walks"}}};
  std::vector<ConfusionPair> conf = {{"their", {"there"}}};
  CHECK_THROWS_AS(CorruptionRuleSet({}, conf, {"the"}, {"a"}), ValidationError);
  CHECK_THROWS_AS(CorruptionRuleSet(verbs, {}, {"the"}, {"a"}), ValidationError);
  CHECK_THROWS_AS(CorruptionRuleSet(verbs, conf, {}, {"a"}), ValidationError);
  CHECK_THROWS_AS(CorruptionRuleSet(verbs, conf, {"the"}, {}), ValidationError);
  CHECK_NOTHROW(CorruptionRuleSet(verbs, conf, {"the"}, {"a"}));
}

TEST_CASE("config validation") {
  CorruptionConfig c;
  CHECK_NOTHROW(c.validate());
  c.per_token_error_prob = 1.5;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.max_errors_per_sentence = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.rule_weights = {0, 0, 0, 0};
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.rule_weights[1] = -1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("implausible verb leaves the group") {
  const auto& rules = testing::bundled_rules();
  const auto& verbs = rules.verbs();
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(s);
    const auto out = apply_rule(CorruptionRule::Verb, CorruptionMode::Implausible, tok("abandon"), rules, rng);
    REQUIRE(out.has_value());
    REQUIRE(out->size() == 1);
    CHECK_FALSE(verbs.same_group("abandon", to_lower(out->front())));
    Rng rng2(s);
    const auto p = apply_rule(CorruptionRule::Verb, CorruptionMode::Plausible, tok("abandon"), rules, rng2);
    REQUIRE(p.has_value());
    CHECK(verbs.same_group("abandon", p->front()));
    CHECK(p->front() != "abandon");
  }
}

TEST_CASE("plausible replace uses the own confusion set") {
  std::vector<VerbFormGroup> verbs = {{"walk", {"walk", "walks"}}};
  std::vector<ConfusionPair> conf = {{"equipment", {"equipmet"}}, {"therefore", {"Therefofe"}}};
  const CorruptionRuleSet rules(verbs, conf, {"the"}, {"a"});
  Rng rng(1);
  const auto out = apply_rule(CorruptionRule::Replace, CorruptionMode::Plausible, tok("equipment"), rules, rng);
  REQUIRE(out.has_value());
  CHECK(*out == std::vector<std::string>{"equipmet"});
  const auto imp = apply_rule(CorruptionRule::Replace, CorruptionMode::Implausible, tok("equipment"), rules, rng);
  REQUIRE(imp.has_value());
  CHECK(*imp == std::vector<std::string>{"Therefofe"});
}

TEST_CASE("insert and delete swap their lists across modes") {
  std::vector<VerbFormGroup> verbs = {{"walk", {"walk", "walks"}}};
  std::vector<ConfusionPair> conf = {{"their", {"there"}}};
  const CorruptionRuleSet rules(verbs, conf, {"the"}, {"of"});
  Rng rng(2);
  CHECK(*apply_rule(CorruptionRule::Insert, CorruptionMode::Plausible, tok("cat"), rules, rng) ==
        std::vector<std::string>{"the", "cat"});
  CHECK(*apply_rule(CorruptionRule::Insert, CorruptionMode::Implausible, tok("cat"), rules, rng) ==
        std::vector<std::string>{"of", "cat"});
  CHECK(apply_rule(CorruptionRule::Delete, CorruptionMode::Plausible, tok("of"), rules, rng)->empty());
  CHECK_FALSE(apply_rule(CorruptionRule::Delete, CorruptionMode::Plausible, tok("the"), rules, rng).has_value());
  CHECK(apply_rule(CorruptionRule::Delete, CorruptionMode::Implausible, tok("the"), rules, rng)->empty());
  CHECK_FALSE(apply_rule(CorruptionRule::Delete, CorruptionMode::Implausible, tok("of"), rules, rng).has_value());
}

TEST_CASE("zero probability means no corruption") {
  CorruptionConfig c;
  c.per_token_error_prob = 0;
  Rng rng(5);
  const auto out = corrupt("The cat sat on the mat .", testing::bundled_rules(), c, rng);
  CHECK_FALSE(out.corrupted());
  CHECK(out.pair.source == out.pair.target);
  CHECK(out.pair.target == "The cat sat on the mat .");
}

TEST_CASE("empty sentence is rejected") {
  Rng rng(5);
  CHECK_THROWS_AS(corrupt("  ", testing::bundled_rules(), CorruptionConfig{}, rng), ValidationError);
}

TEST_CASE("same seed, same output") {
  CorruptionConfig c;
  c.seed = 99;
  for (const auto& s : testing::seed_sentences()) {
    const auto a = corrupt_with_retries(s, testing::bundled_rules(), c, 4);
    const auto b = corrupt_with_retries(s, testing::bundled_rules(), c, 4);
    CHECK(a.pair == b.pair);
  }
}

TEST_CASE("mutations describe the corrupted source") {
  CorruptionConfig c;
  c.per_token_error_prob = 0.4;
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto& sentences = testing::seed_sentences();
    const auto out = corrupt_with_retries(sentences[i % sentences.size()], testing::bundled_rules(), c, i);
    if (!out.corrupted()) continue;
    CHECK(out.mutations.size() <= 4);
    const auto target = surfaces(tokenize(out.pair.target));
    std::vector<std::string> rebuilt;
    std::size_t m = 0;
    for (std::size_t k = 0; k < target.size(); ++k) {
      if (m < out.mutations.size() && out.mutations[m].token_index == static_cast<int>(k)) {
        CHECK(out.mutations[m].original == target[k]);
        for (const auto& w : out.mutations[m].replacement) rebuilt.push_back(w);
        ++m;
      } else {
        rebuilt.push_back(target[k]);
      }
    }
    CHECK(m == out.mutations.size());
    CHECK(join(rebuilt) == out.pair.source);
  }
}

TEST_CASE("site count matches the capped binomial within 3 sigma") {
  // INSERT always applies, so every drawn site fires.
  const std::string sentence = "one two three four five six seven eight nine ten eleven twelve";
  const int n = 12;
  const auto& rules = testing::bundled_rules();
  for (const auto& [p, cap] : std::vector<std::pair<double, int>>{{0.15, 4}, {0.3, 2}, {0.1, 100}}) {
    auto cfg = only(CorruptionRule::Insert, CorruptionMode::Plausible);
    cfg.per_token_error_prob = p;
    cfg.max_errors_per_sentence = cap;
    // Exact mean and variance of min(Binomial(n, p), cap).
    double mean = 0, second = 0;
    for (int k = 0; k <= n; ++k) {
      const double pk = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) *
                        std::pow(p, k) * std::pow(1 - p, n - k);
      const double v = std::min(k, cap);
      mean += pk * v;
      second += pk * v * v;
    }
    const double var = second - mean * mean;
    const int samples = 20000;
    double total = 0;
    for (int s = 0; s < samples; ++s) {
      Rng rng = Rng::substream(123, static_cast<std::uint64_t>(s));
      total += static_cast<double>(corrupt(sentence, rules, cfg, rng).mutations.size());
    }
    const double observed = total / samples;
    const double sigma = std::sqrt(var / samples);
    CHECK_MESSAGE(std::abs(observed - mean) <= 3 * sigma, "p=" << p << " cap=" << cap);
    CHECK(mean <= std::min(p * n, static_cast<double>(cap)) + 1e-12);
  }
}

TEST_CASE("classifier corpus is 1:1 and reproducible") {
  Dataset positives;
  const auto sentences = testing::seed_sentences();
  for (int i = 0; i < 100; ++i) positives.pairs.push_back({"He go home .", "He goes home ."});
  std::vector<std::string> clean(sentences.begin(), sentences.begin() + 200);
  CorpusBuildStats stats;
  const auto a = build_classifier_corpus(positives, clean, testing::bundled_rules(), {}, 5, false, &stats);
  CHECK(a.size() == 200);
  CHECK(stats.reliable == 100);
  CHECK(stats.unreliable == 100);
  std::size_t reliable = 0;
  for (const auto& p : a) {
    if (p.label == Label::Reliable) {
      ++reliable;
      CHECK(p.origin == Origin::Human);
    } else {
      CHECK(p.origin == Origin::ImplausibleRule);
    }
  }
  CHECK(reliable == 100);
  const auto b = build_classifier_corpus(positives, clean, testing::bundled_rules(), {}, 5, false);
  CHECK(a == b);
  std::ostringstream oa, ob;
  write_labeled_tsv(a, oa);
  write_labeled_tsv(b, ob);
  CHECK(oa.str() == ob.str());
  const auto c = build_classifier_corpus(positives, clean, testing::bundled_rules(), {}, 5, false, nullptr,
                                         Executor(4));
  CHECK(a == c);
}

TEST_CASE("short clean collections need resampling") {
  Dataset positives;
  for (int i = 0; i < 10; ++i) positives.pairs.push_back({"He go home .", "He goes home ."});
  const std::vector<std::string> clean = {"The cat sat on the mat .", "We walked to the old station ."};
  CHECK_THROWS_AS(build_classifier_corpus(positives, clean, testing::bundled_rules(), {}, 1, false), DataError);
  CorpusBuildStats stats;
  const auto out = build_classifier_corpus(positives, clean, testing::bundled_rules(), {}, 1, true, &stats);
  CHECK(stats.resampled_sentences == 8);
  CHECK(stats.reliable == stats.unreliable);
  CHECK(out.size() == 2 * stats.reliable);
}

TEST_CASE("labeled tsv round trip") {
  std::vector<LabeledPair> pairs = {{{"a b", "a c", std::nullopt}, Label::Reliable, Origin::Human},
                                    {{"x", "y", std::nullopt}, Label::Unreliable, Origin::ImplausibleRule},
                                    {{"p", "q", std::nullopt}, Label::Reliable, Origin::PlausibleRule}};
  std::ostringstream out;
  write_labeled_tsv(pairs, out);
  std::istringstream in(out.str());
  CHECK(parse_labeled_tsv(in) == pairs);
  std::istringstream bad("a\tb\tMAYBE\tHUMAN\n");
  CHECK_THROWS_AS(parse_labeled_tsv(bad), DataError);
}
