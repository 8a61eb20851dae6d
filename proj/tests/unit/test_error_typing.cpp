#include <random>

#include "doctest.h"
#include "gecdq/error_typing.hpp"
#include "gecdq/errors.hpp"
#include "test_support.hpp"

using namespace gecdq;

namespace {

std::vector<ErrorType> types_of(std::string_view src, std::string_view tgt) {
  return testing::analyzer().analyze(src, tgt).types;
}

ErrorType single(std::string_view src, std::string_view tgt) {
  const auto t = types_of(src, tgt);
  REQUIRE(t.size() == 1);
  return t[0];
}

}  // namespace

TEST_CASE("labels round trip in reporting order") {
  const std::vector<std::string> expected = {"OTHER", "ADV",        "PREP",       "ORTH",  "NOUN",     "MORPH",
                                             "DET",   "PRON",       "VERB:SVA",   "PART",  "VERB",     "VERB:TENSE",
                                             "VERB:FORM", "SPELL",  "CONJ",       "ADJ",   "WO",       "PUNCT",
                                             "NOUN:NUM",  "ADJ:FORM", "CONTR",    "NOUN:POS", "NOUN:INFL"};
  REQUIRE(all_error_types().size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(to_string(all_error_types()[i]) == expected[i]);
    CHECK(parse_error_type(expected[i]) == all_error_types()[i]);
  }
  CHECK_FALSE(parse_error_type("R:SPELL").has_value());
}

TEST_CASE("reference examples") {
  CHECK(single("the areas most related to", "the areas most relating to") == ErrorType::VerbForm);
  CHECK(single("Hello .", "Hello ,") == ErrorType::Punct);
  CHECK(single("a nice locale here", "a nice louce here") == ErrorType::Spell);
  CHECK(single("a nice louce here", "a nice locale here") == ErrorType::Spell);
}

TEST_CASE("cascade rules") {
  CHECK(single("He go home .", "He goes home .") == ErrorType::VerbSva);
  CHECK(single("Yesterday I go home .", "Yesterday I went home .") == ErrorType::VerbTense);
  CHECK(single("I want to going home .", "I want to go home .") == ErrorType::VerbForm);
  CHECK(single("i like it .", "I like it .") == ErrorType::Orth);
  CHECK(single("She always is late .", "She is always late .") == ErrorType::Wo);
  CHECK(single("I do not know .", "I do n't know .") == ErrorType::Contr);
  CHECK(single("I have three cat .", "I have three cats .") == ErrorType::NounNum);
  CHECK(single("I found the dog bone .", "I found the dog 's bone .") == ErrorType::NounPos);
  CHECK(single("I saw a elephant .", "I saw an elephant .") == ErrorType::Det);
  CHECK(single("I am good in math .", "I am good at math .") == ErrorType::Prep);
  CHECK(single("I recieve letters .", "I receive letters .") == ErrorType::Spell);
  CHECK(single("It was fun .", "It was a lot of fun .") == ErrorType::Other);
}

TEST_CASE("classify_edit is deterministic and ignores distant context") {
  // Rules other than subject agreement look only at the edit and its left neighbour.
  const auto a = types_of("I saw a elephant at the zoo yesterday .", "I saw an elephant at the zoo yesterday .");
  const auto b = types_of("I saw a elephant yesterday at the zoo .", "I saw an elephant yesterday at the zoo .");
  CHECK(a == b);
  CHECK(a == types_of("I saw a elephant at the zoo yesterday .", "I saw an elephant at the zoo yesterday ."));
}

TEST_CASE("distribution basics") {
  Dataset same{{{"a b", "a b"}, {"c", "c"}}, ""};
  const auto zero = distribution_of(same, testing::analyzer());
  CHECK(zero.total_edits == 0);
  CHECK(zero.sum() == 0.0);
  CHECK(other_share(zero) == 0.0);

  Dataset punct{{{"Hi .", "Hi !"}, {"Yes ,", "Yes ."}, {"No", "No ."}}, ""};
  const auto p = distribution_of(punct, testing::analyzer());
  CHECK(p.total_edits == 3);
  CHECK(p[ErrorType::Punct] == 100.0);
}

TEST_CASE("published columns") {
  const auto tagged = ErrorDistribution::from_percentages(testing::kTaggedOriginal, 1);
  const auto back = ErrorDistribution::from_percentages(testing::kBacktransOriginal, 1);
  CHECK(other_share(tagged) == doctest::Approx(23.45));
  CHECK(other_share(back) == doctest::Approx(18.17));
  CHECK(tagged.sum() == doctest::Approx(100.0).epsilon(0.002));
}

TEST_CASE("distribution json has 23 keys plus total_edits") {
  Dataset ds{{{"He go home .", "He goes home ."}, {"Hi .", "Hi !"}}, ""};
  const auto d = distribution_of(ds, testing::analyzer());
  const nlohmann::json j = d;
  CHECK(j.size() == kErrorTypeCount + 1);
  CHECK(j["total_edits"] == 2);
  CHECK(j["PUNCT"].get<double>() == 50.0);
  const auto back = j.get<ErrorDistribution>();
  CHECK(back.mass == d.mass);
  CHECK(back.total_edits == d.total_edits);
}

TEST_CASE("concatenation is the edit-weighted average") {
  std::mt19937_64 gen(9);
  const auto sentences = testing::seed_sentences();
  const auto& rules = testing::bundled_rules();
  CorruptionConfig cfg;
  cfg.per_token_error_prob = 0.3;
  for (int trial = 0; trial < 5; ++trial) {
    Dataset a, b;
    for (int i = 0; i < 40; ++i) {
      Rng rng(gen());
      const auto out = corrupt(sentences[gen() % sentences.size()], rules, cfg, rng);
      (i % 3 ? a : b).pairs.push_back(out.pair);
    }
    Dataset ab = a;
    ab.pairs.insert(ab.pairs.end(), b.pairs.begin(), b.pairs.end());
    const auto da = distribution_of(a, testing::analyzer());
    const auto db = distribution_of(b, testing::analyzer());
    const auto dab = distribution_of(ab, testing::analyzer());
    REQUIRE(dab.total_edits == da.total_edits + db.total_edits);
    for (auto t : all_error_types()) {
      const double w = (da[t] * da.total_edits + db[t] * db.total_edits) / dab.total_edits;
      CHECK(dab[t] == doctest::Approx(w).epsilon(1e-12));
    }
    CHECK(dab.sum() == doctest::Approx(100.0).epsilon(0.001));
  }
}

TEST_CASE("counts do not depend on the thread count") {
  Dataset ds;
  const auto sentences = testing::seed_sentences();
  CorruptionConfig cfg;
  for (std::size_t i = 0; i < sentences.size(); ++i)
    ds.pairs.push_back(corrupt_with_retries(sentences[i], testing::bundled_rules(), cfg, i).pair);
  const auto one = count_error_types(ds, testing::analyzer(), Executor(1));
  const auto many = count_error_types(ds, testing::analyzer(), Executor(7));
  CHECK(one.counts == many.counts);
}
