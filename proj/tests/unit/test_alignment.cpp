#include <random>

#include "doctest.h"
#include "gecdq/edit_extraction.hpp"
#include "gecdq/errors.hpp"
#include "test_support.hpp"

using namespace gecdq;

namespace {

std::vector<Token> toks(std::string_view s) { return tokenize(s); }

std::vector<Token> random_tokens(std::mt19937_64& gen, const std::vector<std::string>& alphabet, std::size_t max_len) {
  const auto len = gen() % (max_len + 1);
  std::string s;
  for (std::size_t k = 0; k < len; ++k) s += (k ? " " : "") + alphabet[gen() % alphabet.size()];
  return tokenize(s);
}

void check_well_formed(const EditScript& script, std::span<const Token> s, std::span<const Token> t) {
  int prev_src = -1, prev_tgt = -1;
  for (const auto& e : script.edits) {
    CHECK(e.src_start <= e.src_end);
    CHECK(e.tgt_start <= e.tgt_end);
    CHECK_FALSE((e.src_start == e.src_end && e.tgt_start == e.tgt_end));
    CHECK(e.src_start >= prev_src);
    CHECK(e.tgt_start >= prev_tgt);
    prev_src = e.src_end;
    prev_tgt = e.tgt_end;
    for (int i = e.src_start; i < e.src_end; ++i) CHECK(e.src_tokens[i - e.src_start] == s[i].surface);
    for (int j = e.tgt_start; j < e.tgt_end; ++j) CHECK(e.tgt_tokens[j - e.tgt_start] == t[j].surface);
  }
}

}  // namespace

TEST_CASE("identity alignment has no edits") {
  const auto s = toks("the cat sat on the mat .");
  const auto script = align(s, s);
  CHECK(script.edits.empty());
  CHECK(script.cost == 0.0);
}

TEST_CASE("related -> relating is one edit") {
  const auto s = toks("the areas most related to");
  const auto t = toks("the areas most relating to");
  const auto script = align(s, t, {}, &testing::bundled().verbs);
  REQUIRE(script.edits.size() == 1);
  const auto& e = script.edits[0];
  CHECK(e.src_tokens == std::vector<std::string>{"related"});
  CHECK(e.tgt_tokens == std::vector<std::string>{"relating"});
  CHECK(script.cost == doctest::Approx(0.6));
}

TEST_CASE("single deletion") {
  const auto script = align(toks("a b c"), toks("a c"));
  REQUIRE(script.edits.size() == 1);
  const auto& e = script.edits[0];
  CHECK(e.src_start == 1);
  CHECK(e.src_end == 2);
  CHECK(e.tgt_start == 1);
  CHECK(e.tgt_end == 1);
}

TEST_CASE("substitution cost table") {
  const auto& verbs = testing::bundled().verbs;
  const AlignCosts c;
  const auto tok = [](std::string_view w) { return tokenize(w).front(); };
  CHECK(substitution_cost(tok("walk"), tok("walk"), c, &verbs) == 0.0);
  CHECK(substitution_cost(tok("Walk"), tok("walk"), c, &verbs) == c.related);
  CHECK(substitution_cost(tok("walk"), tok("walked"), c, &verbs) == c.related);
  CHECK(substitution_cost(tok("locale"), tok("louce"), c, &verbs) == c.orthographic);
  CHECK(substitution_cost(tok("cat"), tok("dog"), c, &verbs) == c.substitution);
}

TEST_CASE("apply") {
  const std::vector<std::string> ab = {"a", "b"};
  EditScript empty;
  empty.source_len = 2;
  CHECK(gecdq::apply(empty, ab) == ab);

  EditScript wrong;
  wrong.source_len = 3;
  CHECK_THROWS_AS(gecdq::apply(wrong, ab), ValidationError);
}

TEST_CASE("edit_count_stats") {
  CHECK(edit_count_stats(align(toks("a b c d e"), toks("a b c d e"))).n_edits == 0);
  CHECK(edit_count_stats(align(toks("a b c d e"), toks("a b c d e"))).edited_token_fraction == 0.0);

  const auto two_of_four = edit_count_stats(align(toks("a b c d"), toks("a x y d")));
  CHECK(two_of_four.n_edits == 1);
  CHECK(two_of_four.edited_token_fraction == doctest::Approx(0.5));

  const auto full = edit_count_stats(align(toks("p q r"), toks("x y z")));
  CHECK(full.n_edits == 1);
  CHECK(full.edited_token_fraction == doctest::Approx(1.0));
}

TEST_CASE("round trip, symmetry and well-formedness over random pairs") {
  std::mt19937_64 gen(3);
  const std::vector<std::string> alphabet = {"a", "b", "c", "the", "The", "walk", "walked", "walks", "talk", "."};
  const auto& verbs = testing::bundled().verbs;
  for (int trial = 0; trial < 3000; ++trial) {
    const auto s = random_tokens(gen, alphabet, 12);
    const auto t = random_tokens(gen, alphabet, 12);
    const auto st = align(s, t, {}, &verbs);
    const auto ts = align(t, s, {}, &verbs);
    CHECK(gecdq::apply(st, surfaces(s)) == surfaces(t));
    CHECK(st.cost == doctest::Approx(ts.cost));
    check_well_formed(st, s, t);
  }
}

TEST_CASE("cost equals exhaustive search on small inputs") {
  std::mt19937_64 gen(17);
  const std::vector<std::string> alphabet = {"walk", "Walk", "walked", "talk"};
  const auto& verbs = testing::bundled().verbs;
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_tokens(gen, alphabet, 6);
    const auto t = random_tokens(gen, alphabet, 6);
    const AlignCosts c;
    const double brute = testing::brute_force_alignment_cost(
        s.size(), t.size(), [&](std::size_t i, std::size_t j) { return substitution_cost(s[i], t[j], c, &verbs); },
        c.indel);
    CHECK(align(s, t, c, &verbs).cost == doctest::Approx(brute).epsilon(1e-12));
  }
}
