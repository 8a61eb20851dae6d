// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.
// Usage: acceptance PATH_TO_GECDQ_BINARY

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "gecdq/classifier.hpp"
#include "gecdq/quality_metrics.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace gecdq;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << x;
  return os.str();
}

template <class Fn>
bool criterion(int id, const std::string& name, double budget_s, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += "; over time budget";
  }
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << "  " << name << "  (" << fmt(secs, 2) << " s / "
            << budget_s << " s)  " << o.detail << std::endl;
  return o.pass;
}

// ---------------------------------------------------------------------------

Outcome c1_fbeta() {
  const double rows[3][3] = {{12.86, 21.74, 14.01}, {13.87, 23.38, 15.10}, {50.66, 33.98, 46.13}};
  double worst = 0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(f_beta_from_pr(r[0], r[1], 0.5) - r[2]));
  return {worst <= 0.01, "max |F0.5 - published| = " + fmt(worst)};
}

Outcome c2_normalisation() {
  double published = 0;
  for (double x : testing::kTaggedOriginal) published += x;
  const bool column_ok = std::abs(published - 100.0) <= 0.2;

  const auto sentences = testing::seed_sentences();
  const auto& rules = testing::bundled_rules();
  double worst = 0;
  long long min_edits = -1;
  std::mt19937_64 gen(2024);
  for (int corpus = 0; corpus < 10; ++corpus) {
    CorruptionConfig cfg;
    cfg.mode = corpus % 2 ? CorruptionMode::Implausible : CorruptionMode::Plausible;
    cfg.per_token_error_prob = 0.05 + 0.05 * static_cast<double>(gen() % 6);
    cfg.max_errors_per_sentence = 1 + static_cast<int>(gen() % 4);
    cfg.seed = gen();
    const Executor ex(4);
    const auto outs = ex.map<CorruptionOutcome>(1000, [&](std::size_t i) {
      return corrupt_with_retries(sentences[(i * 7919 + corpus) % sentences.size()], rules, cfg, i);
    });
    Dataset ds;
    for (const auto& o : outs) ds.pairs.push_back(o.pair);
    const auto d = distribution_of(ds, testing::analyzer(), ex);
    worst = std::max(worst, std::abs(d.sum() - 100.0));
    min_edits = min_edits < 0 ? d.total_edits : std::min(min_edits, d.total_edits);
  }
  return {column_ok && worst <= 0.1 && min_edits > 0,
          "published column sums to " + fmt(published, 2) + "; max |sum - 100| over 10 corpora = " +
              fmt(worst, 12) + " (min edits " + std::to_string(min_edits) + ")"};
}

Outcome c3_alignment() {
  std::mt19937_64 gen(77);
  const std::vector<std::string> alphabet = {"walk", "Walk", "walked", "talk"};
  const auto& verbs = testing::bundled().verbs;
  const AlignCosts costs;
  // Cost table written out independently: identical 0, case-only or same verb
  // group 0.6, near spelling 0.8, otherwise 1.
  const auto table = [](const std::string& a, const std::string& b) {
    if (a == b) return 0.0;
    const auto lo = [](std::string s) {
      for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      return s;
    };
    const std::string x = lo(a), y = lo(b);
    if (x == y) return 0.6;
    if ((x == "walk" || x == "walked") && (y == "walk" || y == "walked")) return 0.6;
    return 0.8;  // talk vs walk/walked: near spellings
  };
  const auto random_tokens = [&](std::size_t max_len, const std::vector<std::string>& alpha) {
    std::string s;
    for (std::size_t k = 0, len = gen() % (max_len + 1); k < len; ++k) s += (k ? " " : "") + alpha[gen() % alpha.size()];
    return tokenize(s);
  };
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = random_tokens(8, alphabet);
    const auto t = random_tokens(8, alphabet);
    const double brute = testing::brute_force_alignment_cost(
        s.size(), t.size(), [&](std::size_t i, std::size_t j) { return table(s[i].surface, t[j].surface); }, 1.0);
    if (std::abs(align(s, t, costs, &verbs).cost - brute) > 1e-9) ++mismatches;
  }
  const std::vector<std::string> wide = {"a", "b", "c", "the", "The", "cat", "cats", "walk", "walked", ".", ","};
  int broken = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto s = random_tokens(30, wide);
    const auto t = random_tokens(30, wide);
    if (gecdq::apply(align(s, t, costs, &verbs), surfaces(s)) != surfaces(t)) ++broken;
  }
  return {mismatches == 0 && broken == 0, std::to_string(mismatches) + "/1000 cost mismatches vs exhaustive search, " +
                                              std::to_string(broken) + "/10000 round-trip failures"};
}

Outcome c4_corruption_modes() {
  const auto& rules = testing::bundled_rules();
  const auto& verbs = rules.verbs();
  const auto& conf = rules.confusions();
  long long checks = 0, violations = 0;
  const auto token = [](const std::string& w) { return tokenize(w).front(); };

  std::uint64_t stream = 0;
  for (const auto& g : verbs.groups()) {
    for (const auto& form : g.forms) {
      for (int draw = 0; draw < 3; ++draw) {
        Rng rng = Rng::substream(1, stream++);
        const auto imp = apply_rule(CorruptionRule::Verb, CorruptionMode::Implausible, token(form), rules, rng);
        const auto pla = apply_rule(CorruptionRule::Verb, CorruptionMode::Plausible, token(form), rules, rng);
        checks += 2;
        if (!imp || imp->size() != 1 || verbs.same_group(form, to_lower(imp->front())) ||
            !verbs.contains(to_lower(imp->front())))
          ++violations;
        if (!pla || pla->size() != 1 || !verbs.same_group(form, pla->front()) || pla->front() == form) ++violations;
      }
    }
  }
  for (const auto& e : conf.entries()) {
    for (int draw = 0; draw < 3; ++draw) {
      Rng rng = Rng::substream(2, stream++);
      const auto imp = apply_rule(CorruptionRule::Replace, CorruptionMode::Implausible, token(e.word), rules, rng);
      const auto pla = apply_rule(CorruptionRule::Replace, CorruptionMode::Plausible, token(e.word), rules, rng);
      checks += 2;
      if (!pla || pla->size() != 1 || !conf.confusable(e.word, to_lower(pla->front()))) ++violations;
      if (imp && (imp->size() != 1 || conf.confusable(e.word, to_lower(imp->front())) ||
                  to_lower(imp->front()) == e.word))
        ++violations;
      if (!imp) ++violations;
    }
  }
  // INSERT draws from the insertions list in PLAUSIBLE mode and from the
  // deletions list in IMPLAUSIBLE mode; DELETE applicability mirrors that.
  std::vector<std::string> words(rules.insertions().begin(), rules.insertions().end());
  words.insert(words.end(), rules.deletions().begin(), rules.deletions().end());
  for (const char* w : {"cat", "house", "quickly", "walked"}) words.emplace_back(w);
  const std::unordered_set<std::string> ins(rules.insertions().begin(), rules.insertions().end());
  const std::unordered_set<std::string> del(rules.deletions().begin(), rules.deletions().end());
  for (const auto& w : words) {
    for (int draw = 0; draw < 3; ++draw) {
      Rng rng = Rng::substream(3, stream++);
      const auto pi = apply_rule(CorruptionRule::Insert, CorruptionMode::Plausible, token(w), rules, rng);
      const auto ii = apply_rule(CorruptionRule::Insert, CorruptionMode::Implausible, token(w), rules, rng);
      const auto pd = apply_rule(CorruptionRule::Delete, CorruptionMode::Plausible, token(w), rules, rng);
      const auto id = apply_rule(CorruptionRule::Delete, CorruptionMode::Implausible, token(w), rules, rng);
      checks += 4;
      if (!pi || pi->size() != 2 || !ins.contains(to_lower(pi->front())) || pi->back() != w) ++violations;
      if (!ii || ii->size() != 2 || !del.contains(to_lower(ii->front())) || ii->back() != w) ++violations;
      if (pd.has_value() != del.contains(w) || (pd && !pd->empty())) ++violations;
      if (id.has_value() != ins.contains(w) || (id && !id->empty())) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(checks) + " checks over " +
                               std::to_string(verbs.groups().size()) + " verb groups, " +
                               std::to_string(conf.entries().size()) + " confusion entries, " +
                               std::to_string(words.size()) + " list words"};
}

Outcome c5_separability() {
  const auto sentences = testing::seed_sentences();
  const Executor ex(std::max(1u, std::thread::hardware_concurrency()));
  CorpusBuildStats stats;
  auto corpus = build_contrast_corpus(sentences, 5000, testing::bundled_rules(), {}, 11, &stats, ex);
  // Seeded 80/20 split.
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng::substream(11, 12345).shuffle(order);
  const std::size_t n_hold = corpus.size() / 5;
  std::vector<LabeledPair> train_set, hold;
  for (std::size_t k = 0; k < order.size(); ++k) (k < n_hold ? hold : train_set).push_back(corpus[order[k]]);

  TrainConfig cfg;
  cfg.seed = 11;
  const auto model = train(train_set, testing::analyzer(), cfg, ex);
  const auto hold_x = make_examples(hold, testing::analyzer(), ex);
  const double acc = accuracy(model, hold_x);
  Dataset plausible, implausible;
  for (const auto& p : hold) (p.origin == Origin::PlausibleRule ? plausible : implausible).pairs.push_back(p.pair);
  const double rp = score_dataset(model, plausible, testing::analyzer(), ex).reliability_metric;
  const double ri = score_dataset(model, implausible, testing::analyzer(), ex).reliability_metric;
  const bool sizes_ok = stats.reliable + stats.unreliable == corpus.size() && stats.reliable >= 4900 &&
                        stats.unreliable >= 4900;
  return {sizes_ok && acc >= 0.90 && rp - ri >= 40.0,
          "corpus " + std::to_string(stats.reliable) + "+" + std::to_string(stats.unreliable) + ", held-out accuracy " +
              fmt(acc) + ", reliability " + fmt(rp, 2) + " vs " + fmt(ri, 2) + " (gap " + fmt(rp - ri, 2) + ")"};
}

Outcome c6_gradient() {
  std::mt19937_64 gen(606);
  std::normal_distribution<double> normal(0, 1);
  std::uniform_real_distribution<double> unit(0, 1);
  double worst = 0;
  for (int draw = 0; draw < 100; ++draw) {
    std::vector<Example> one(1);
    for (std::uint32_t i = 0; i < 64; ++i)
      if (unit(gen) < 0.3) one[0].x.entries.push_back({i, unit(gen)});
    one[0].y = static_cast<int>(gen() % 2);
    std::vector<double> w(64);
    for (auto& v : w) v = normal(gen);
    const double b = normal(gen);
    const double l2 = std::pow(10.0, -1 - 4 * unit(gen));
    std::vector<double> gw;
    double gb = 0;
    objective(w, b, one, l2, &gw, &gb);
    const double h = 1e-5;
    double diff2 = 0, a2 = 0, n2 = 0;
    for (std::size_t i = 0; i <= 64; ++i) {
      double num;
      if (i < 64) {
        auto wp = w, wm = w;
        wp[i] += h;
        wm[i] -= h;
        num = (objective(wp, b, one, l2) - objective(wm, b, one, l2)) / (2 * h);
      } else {
        num = (objective(w, b + h, one, l2) - objective(w, b - h, one, l2)) / (2 * h);
      }
      const double ana = i < 64 ? gw[i] : gb;
      diff2 += (ana - num) * (ana - num);
      a2 += ana * ana;
      n2 += num * num;
    }
    const double rel = std::sqrt(diff2) / std::max({std::sqrt(a2), std::sqrt(n2), 1e-12});
    worst = std::max(worst, rel);
  }
  return {worst <= 1e-5, "max relative error " + [&] {
            std::ostringstream os;
            os << worst;
            return os.str();
          }() + " over 100 draws (D = 64)"};
}

Outcome c7_jsd() {
  std::mt19937_64 gen(707);
  int symmetry = 0, bounds = 0, identity = 0, separation = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen() % 22;
    std::vector<double> p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = gen() % 3 == 0 ? 0.0 : static_cast<double>(gen() % 1000);
      q[i] = gen() % 3 == 0 ? 0.0 : static_cast<double>(gen() % 1000);
    }
    p[0] += 1;
    q[n - 1] += 1;
    const double d = jsd(p, q);
    if (d != jsd(q, p)) ++symmetry;
    if (d < 0 || d > 1) ++bounds;
    if (jsd(p, p) != 0.0) ++identity;
    // Unequal after normalisation must give a positive value.
    double sp = 0, sq = 0;
    for (std::size_t i = 0; i < n; ++i) sp += p[i], sq += q[i];
    bool equal = true;
    for (std::size_t i = 0; i < n; ++i) equal = equal && std::abs(p[i] / sp - q[i] / sq) <= 1e-12;
    if (!equal && !(d > 0)) ++separation;
    if (equal && d > 1e-12) ++separation;
  }
  const auto constants = testing::regression_constants();
  const double two = jsd(std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.75});
  const auto tagged = ErrorDistribution::from_percentages(testing::kTaggedOriginal, 1);
  const auto back = ErrorDistribution::from_percentages(testing::kBacktransOriginal, 1);
  const double frozen = constants["jsd_tagged_vs_backtranslation_original"].get<double>();
  const double got = jsd(tagged, back);
  const bool ok = symmetry + bounds + identity + separation == 0 && std::abs(two - 0.0488) <= 0.0001 &&
                  std::abs(got - frozen) <= 1e-6;
  return {ok, "violations sym/bounds/identity/separation " + std::to_string(symmetry) + "/" + std::to_string(bounds) +
                  "/" + std::to_string(identity) + "/" + std::to_string(separation) + "; two-point " + fmt(two, 7) +
                  "; columns " + fmt(got, 9) + " vs frozen " + fmt(frozen, 9)};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<missing>";
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int sh(const std::string& cmd) {
  const int rc = std::system((cmd + " 2>>" + "/dev/null").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome c8_determinism(const std::string& tool, const fs::path& work) {
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  fs::remove_all(work);
  fs::create_directories(work);
  const auto sentences = testing::seed_sentences();
  {
    std::ofstream clean(work / "clean.txt");
    for (std::size_t i = 0; i < 10000; ++i) clean << sentences[i % sentences.size()] << '\n';
  }
  const std::string bin = "'" + tool + "'";
  const auto w = [&](const std::string& name) { return quote(work / name); };
  // Inputs shared by every run.
  if (sh(bin + " corrupt --in " + w("clean.txt") + " --mode PLAUSIBLE --seed 5 --out " + w("corpus.tsv")) != 0 ||
      sh(bin + " corrupt --in " + w("clean.txt") + " --mode IMPLAUSIBLE --seed 6 --out " + w("implausible.tsv")) !=
          0 ||
      sh(bin + " extract-edits --format m2 --in " + w("corpus.tsv") + " --out " + w("gold.m2")) != 0)
    return {false, "could not prepare the 10k-pair inputs"};
  std::size_t n_pairs = 0;
  {
    std::ifstream in(work / "corpus.tsv");
    for (std::string line; std::getline(in, line);) ++n_pairs;
  }

  struct Command {
    std::string name;
    std::string args;                 // {D} is replaced by the run directory
    std::vector<std::string> outputs;  // files under {D}
  };
  const std::vector<Command> commands = {
      {"corrupt", "corrupt --in " + w("clean.txt") + " --mode IMPLAUSIBLE --seed 9 --out {D}/c.tsv",
       {"c.tsv", "c.tsv.meta.json"}},
      {"build-train-set",
       "build-train-set --positives " + w("corpus.tsv") + " --clean " + w("clean.txt") + " --seed 9 --out {D}/lab.tsv",
       {"lab.tsv", "lab.tsv.meta.json"}},
      {"train", "train --in {D}/lab.tsv --seed 9 --epochs 3 --out {D}/model.json --report {D}/train.json",
       {"model.json", "train.json"}},
      {"extract-edits", "extract-edits --in " + w("corpus.tsv") + " --out {D}/edits.jsonl", {"edits.jsonl"}},
      {"type-dist", "type-dist --in " + w("corpus.tsv") + " --out {D}/dist.json", {"dist.json"}},
      {"score-reliability", "score-reliability --model {D}/model.json --in " + w("corpus.tsv") + " --out {D}/rel.json",
       {"rel.json"}},
      {"partition",
       "partition --model {D}/model.json --in " + w("implausible.tsv") +
           " --reliable-out {D}/r.tsv --unreliable-out {D}/u.tsv --out {D}/part.json",
       {"r.tsv", "u.tsv", "part.json"}},
      {"diversity", "diversity --model {D}/model.json --in " + w("corpus.tsv") + " --out {D}/div.json", {"div.json"}},
      {"dist-match", "dist-match --a " + w("corpus.tsv") + " --b " + w("implausible.tsv") + " --out {D}/dm.json",
       {"dm.json"}},
      {"score-gec", "score-gec --hyp " + w("corpus.tsv") + " --gold " + w("gold.m2") + " --out {D}/gec.json",
       {"gec.json"}},
  };
  const std::vector<std::pair<std::string, int>> runs = {{"run1", 1}, {"run2", 1}, {"run8", 8}};
  for (const auto& [dir, threads] : runs) {
    fs::create_directories(work / dir);
    for (const auto& c : commands) {
      std::string args = c.args;
      for (std::size_t at; (at = args.find("{D}")) != std::string::npos;) args.replace(at, 3, quote(work / dir));
      if (sh(bin + " " + args + " --threads " + std::to_string(threads)) != 0)
        return {false, c.name + " failed in " + dir};
    }
  }
  std::vector<std::string> differing;
  std::size_t files = 0;
  for (const auto& c : commands) {
    for (const auto& f : c.outputs) {
      ++files;
      const auto ref = slurp(work / "run1" / f);
      if (ref == "<missing>" || ref != slurp(work / "run2" / f) || ref != slurp(work / "run8" / f))
        differing.push_back(c.name + ":" + f);
    }
  }
  std::string detail = std::to_string(commands.size()) + " commands, " + std::to_string(files) +
                       " output files, corpus of " + std::to_string(n_pairs) + " pairs; ";
  if (differing.empty()) {
    detail += "all byte-identical across runs and --threads 1/8";
  } else {
    detail += "differs:";
    for (const auto& d : differing) detail += " " + d;
  }
  return {differing.empty() && n_pairs >= 10000, detail};
}

Outcome c9_typer() {
  std::ifstream in(testing::fixture_path("typer_reference.tsv"));
  int total = 0, agree = 0;
  std::vector<std::string> misses;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
    if (cols.size() != 3) throw std::runtime_error("bad fixture line: " + line);
    ++total;
    const auto a = testing::analyzer().analyze(cols[0], cols[1]);
    const bool hit = a.types.size() == 1 && to_string(a.types[0]) == cols[2];
    if (hit) {
      ++agree;
    } else {
      std::string got;
      for (auto t : a.types) got += (got.empty() ? "" : "+") + std::string(to_string(t));
      misses.push_back(cols[2] + "->" + (got.empty() ? "none" : got));
    }
  }
  const double rate = total ? static_cast<double>(agree) / total : 0.0;
  std::string detail = std::to_string(agree) + "/" + std::to_string(total) + " = " + fmt(100 * rate, 1) + "%";
  if (!misses.empty()) {
    detail += "; disagreements:";
    for (const auto& m : misses) detail += " " + m;
  }
  return {total == 50 && rate >= 0.80, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance PATH_TO_GECDQ [WORK_DIR]\n";
    return 2;
  }
  const std::string tool = argv[1];
  const fs::path work = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "gecdq_acceptance";

  int failed = 0;
  failed += !criterion(1, "F0.5 reproduces the published precision/recall rows", 1, c1_fbeta);
  failed += !criterion(2, "distributions sum to 100", 10, c2_normalisation);
  failed += !criterion(3, "alignment is optimal and round-trips", 30, c3_alignment);
  failed += !criterion(4, "corruption modes stay on their side of the lexicons", 10, c4_corruption_modes);
  failed += !criterion(5, "classifier separates plausible from implausible corruptions", 180, c5_separability);
  failed += !criterion(6, "analytic gradient matches finite differences", 5, c6_gradient);
  failed += !criterion(7, "JSD properties and frozen constants", 5, c7_jsd);
  failed += !criterion(8, "CLI output is byte-deterministic", 60, [&] { return c8_determinism(tool, work); });
  failed += !criterion(9, "typer agrees with the reference fixture", 1, c9_typer);
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (9 - failed) << "/9" << std::endl;
  return failed ? 1 : 0;
}
