#include "gecdq/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "gecdq/corpus_io.hpp"
#include "gecdq/error_typing.hpp"
#include "gecdq/errors.hpp"
#include "gecdq/quality_metrics.hpp"

namespace gecdq::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw UsageError("bad value for '" + std::string(key) + "': '" + std::string(text) + "'");
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw UsageError("bad value for '" + std::string(key) + "': '" + std::string(text) + "'");
}

CorruptionMode parse_mode(std::string_view text) {
  const auto m = parse_corruption_mode(text);
  if (!m) throw UsageError("unknown corruption mode '" + std::string(text) + "' (PLAUSIBLE or IMPLAUSIBLE)");
  return *m;
}

// "VERB=1,REPLACE=0.5" -> weights; unnamed rules keep their current weight.
void parse_weights(std::string_view text, CorruptionConfig& c) {
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("rule weight '" + item + "' is not RULE=WEIGHT");
    const auto rule = parse_corruption_rule(trim(item.substr(0, eq)));
    if (!rule) throw UsageError("unknown corruption rule '" + trim(item.substr(0, eq)) + "'");
    c.rule_weights[static_cast<std::size_t>(*rule)] = parse_number<double>("weights", trim(item.substr(eq + 1)));
  }
}

using Setter = std::function<void(ToolConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& config_keys() {
  static const std::map<std::string, Setter, std::less<>> keys = {
      {"data_dir", [](ToolConfig& c, std::string_view v) { c.paths = ResourcePaths::in(std::string(v)); }},
      {"verbs", [](ToolConfig& c, std::string_view v) { c.paths.verbs = v; }},
      {"confusions", [](ToolConfig& c, std::string_view v) { c.paths.confusions = v; }},
      {"insertions", [](ToolConfig& c, std::string_view v) { c.paths.insertions = v; }},
      {"deletions", [](ToolConfig& c, std::string_view v) { c.paths.deletions = v; }},
      {"dictionary", [](ToolConfig& c, std::string_view v) { c.paths.dictionary = v; }},
      {"nouns", [](ToolConfig& c, std::string_view v) { c.paths.nouns = v; }},
      {"adjectives", [](ToolConfig& c, std::string_view v) { c.paths.adjectives = v; }},
      {"threads", [](ToolConfig& c, std::string_view v) { c.threads = parse_number<int>("threads", v); }},
      {"seed", [](ToolConfig& c, std::string_view v) { c.seed = parse_number<std::uint64_t>("seed", v); }},
      {"lenient", [](ToolConfig& c, std::string_view v) { c.lenient = parse_bool("lenient", v); }},
      {"align.related", [](ToolConfig& c, std::string_view v) { c.costs.related = parse_number<double>("align.related", v); }},
      {"align.orthographic",
       [](ToolConfig& c, std::string_view v) { c.costs.orthographic = parse_number<double>("align.orthographic", v); }},
      {"align.char_threshold",
       [](ToolConfig& c, std::string_view v) { c.costs.char_threshold = parse_number<double>("align.char_threshold", v); }},
      {"align.indel", [](ToolConfig& c, std::string_view v) { c.costs.indel = parse_number<double>("align.indel", v); }},
      {"align.substitution",
       [](ToolConfig& c, std::string_view v) { c.costs.substitution = parse_number<double>("align.substitution", v); }},
      {"corrupt.mode", [](ToolConfig& c, std::string_view v) { c.corruption.mode = parse_mode(v); }},
      {"corrupt.per_token_error_prob",
       [](ToolConfig& c, std::string_view v) {
         c.corruption.per_token_error_prob = parse_number<double>("corrupt.per_token_error_prob", v);
       }},
      {"corrupt.max_errors_per_sentence",
       [](ToolConfig& c, std::string_view v) {
         c.corruption.max_errors_per_sentence = parse_number<int>("corrupt.max_errors_per_sentence", v);
       }},
      {"corrupt.rule_weights", [](ToolConfig& c, std::string_view v) { parse_weights(v, c.corruption); }},
      {"train.epochs", [](ToolConfig& c, std::string_view v) { c.training.epochs = parse_number<int>("train.epochs", v); }},
      {"train.learning_rate",
       [](ToolConfig& c, std::string_view v) { c.training.learning_rate = parse_number<double>("train.learning_rate", v); }},
      {"train.l2", [](ToolConfig& c, std::string_view v) { c.training.l2 = parse_number<double>("train.l2", v); }},
      {"train.threshold",
       [](ToolConfig& c, std::string_view v) { c.training.threshold = parse_number<double>("train.threshold", v); }},
      {"train.holdout", [](ToolConfig& c, std::string_view v) { c.holdout = parse_number<double>("train.holdout", v); }},
  };
  return keys;
}

std::vector<std::string> config_key_names() {
  std::vector<std::string> names;
  for (const auto& [k, _] : config_keys()) names.push_back(k);
  return names;
}

// ---------------------------------------------------------------------------
// I/O helpers

void emit(const std::string& path, std::ostream& stdout_, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(stdout_);
    stdout_.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write '" + path + "'");
  write(f);
  f.flush();
  if (!f) throw DataError("failed writing '" + path + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

template <class Fn>
auto with_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

Dataset load_dataset(const std::string& path, const std::string& provenance, bool lenient, std::ostream& err) {
  auto in = open_input(path);
  std::vector<ParseIssue> issues;
  Dataset ds = with_path(path, [&] { return parse_tsv(in, {lenient, &issues}); });
  for (const auto& i : issues) err << "gecdq: " << path << ": skipped: " << i.message << '\n';
  ds.provenance = provenance.empty() ? path : provenance;
  return ds;
}

std::vector<M2Record> load_m2(const std::string& path, bool lenient, std::ostream& err) {
  auto in = open_input(path);
  std::vector<ParseIssue> issues;
  auto records = with_path(path, [&] { return parse_m2(in, {lenient, &issues}); });
  for (const auto& i : issues) err << "gecdq: " << path << ": skipped: " << i.message << '\n';
  return records;
}

std::vector<std::string> load_sentences(const std::string& path) {
  auto in = open_input(path);
  return with_path(path, [&] { return read_lines(in); });
}

LinearModel load_model_file(const std::string& path) {
  auto in = open_input(path);
  auto m = with_path(path, [&] { return load_model(in); });
  with_path(path, [&] { check_schema(m); });
  return m;
}

nlohmann::json typed_edits_json(const AnalyzedPair& a) {
  nlohmann::json edits = nlohmann::json::array();
  for (std::size_t k = 0; k < a.script.edits.size(); ++k) {
    const auto& e = a.script.edits[k];
    edits.push_back({{"src_start", e.src_start},
                     {"src_end", e.src_end},
                     {"tgt_start", e.tgt_start},
                     {"tgt_end", e.tgt_end},
                     {"source", join(e.src_tokens)},
                     {"target", join(e.tgt_tokens)},
                     {"type", to_string(a.types[k])}});
  }
  return edits;
}

// ---------------------------------------------------------------------------
// Flags

/// Storage for every flag; only one subcommand is parsed per run.
struct Flags {
  std::string out, config, data_dir, in, format = "jsonl", mode, weights, sidecar, positives, m2, clean, model,
      reliable_out, unreliable_out, a, b, label_a, label_b, hyp, gold, provenance, report;
  std::string verbs, confusions, insertions, deletions, dictionary, nouns, adjectives;
  int threads = 1, max_errors = 4, epochs = 10, annotator = 0;
  std::size_t contrast = 0;
  std::uint64_t seed = 0;
  double p = 0.15, lr = 0.1, l2 = 1e-6, threshold = 0.5, holdout = 0.2;
  bool lenient = false, allow_resample = false;
};

/// Registers flags that override config values when given on the command line.
class Binder {
 public:
  template <class T, class Apply>
  CLI::Option* add(CLI::App* app, const std::string& name, T& storage, const std::string& help, Apply apply) {
    auto* opt = app->add_option(name, storage, help);
    overrides_.emplace_back(opt, [&storage, apply](ToolConfig& c) { apply(c, storage); });
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& storage, const std::string& help,
                    std::function<void(ToolConfig&)> apply) {
    auto* opt = app->add_flag(name, storage, help);
    overrides_.emplace_back(opt, [apply = std::move(apply)](ToolConfig& c) { apply(c); });
    return opt;
  }

  void apply(ToolConfig& c) const {
    for (const auto& [opt, fn] : overrides_)
      if (opt->count() > 0) fn(c);
  }

 private:
  std::vector<std::pair<CLI::Option*, std::function<void(ToolConfig&)>>> overrides_;
};

void add_common(CLI::App* sub, Flags& f, Binder& bind) {
  sub->add_option("--out,-o", f.out, "Write the primary output here instead of stdout");
  sub->add_option("--config", f.config, "Key-value config file (default: $GEC_DATAQ_CONFIG)");
  bind.add(sub, "--threads", f.threads, "Worker threads", [](ToolConfig& c, int v) { c.threads = v; });
  bind.flag(sub, "--lenient", f.lenient, "Skip malformed records instead of failing",
            [](ToolConfig& c) { c.lenient = true; });
  sub->add_option("--data-dir", f.data_dir, "Directory holding the lexicon files");
  bind.add(sub, "--verbs", f.verbs, "Verb-form lexicon", [](ToolConfig& c, const std::string& v) { c.paths.verbs = v; });
  bind.add(sub, "--confusions", f.confusions, "Confusion lexicon",
           [](ToolConfig& c, const std::string& v) { c.paths.confusions = v; });
  bind.add(sub, "--insertions", f.insertions, "Common insertions word list",
           [](ToolConfig& c, const std::string& v) { c.paths.insertions = v; });
  bind.add(sub, "--deletions", f.deletions, "Common deletions word list",
           [](ToolConfig& c, const std::string& v) { c.paths.deletions = v; });
  bind.add(sub, "--dictionary", f.dictionary, "Dictionary word list",
           [](ToolConfig& c, const std::string& v) { c.paths.dictionary = v; });
  bind.add(sub, "--nouns", f.nouns, "Irregular noun lexicon",
           [](ToolConfig& c, const std::string& v) { c.paths.nouns = v; });
  bind.add(sub, "--adjectives", f.adjectives, "Adjective degree lexicon",
           [](ToolConfig& c, const std::string& v) { c.paths.adjectives = v; });
  sub->allow_extras();
}

void add_seed(CLI::App* sub, Flags& f, Binder& bind) {
  bind.add(sub, "--seed", f.seed, "Random seed", [](ToolConfig& c, std::uint64_t v) { c.seed = v; });
}

void add_corruption(CLI::App* sub, Flags& f, Binder& bind) {
  bind.add(sub, "--p", f.p, "Per-token error probability",
           [](ToolConfig& c, double v) { c.corruption.per_token_error_prob = v; });
  bind.add(sub, "--max-errors", f.max_errors, "Maximum errors per sentence",
           [](ToolConfig& c, int v) { c.corruption.max_errors_per_sentence = v; });
  bind.add(sub, "--weights", f.weights, "Rule weights, e.g. VERB=1,REPLACE=1,INSERT=1,DELETE=1",
           [](ToolConfig& c, const std::string& v) { parse_weights(v, c.corruption); });
  sub->add_option("--sidecar", f.sidecar, "Metadata JSON path (default: OUT.meta.json when --out is set)");
}

std::vector<std::string> option_names(const CLI::App* sub) {
  std::vector<std::string> names;
  for (const auto* opt : sub->get_options())
    for (const auto& l : opt->get_lnames()) names.push_back("--" + l);
  return names;
}

// ---------------------------------------------------------------------------
// Commands

struct Context {
  const ToolConfig& config;
  const Flags& flags;
  std::ostream& out;
  std::ostream& err;
  Executor executor;
};

std::string sidecar_path(const Flags& f) {
  if (!f.sidecar.empty()) return f.sidecar;
  if (!f.out.empty() && f.out != "-") return f.out + ".meta.json";
  return {};
}

void write_sidecar(const Context& ctx, std::string_view kind, const nlohmann::json& payload) {
  const auto path = sidecar_path(ctx.flags);
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write '" + path + "'");
  write_report(kind, payload, f, report_timestamp());
}

int cmd_extract_edits(const Context& ctx, const EditAnalyzer& analyzer) {
  const auto& f = ctx.flags;
  if (f.format != "jsonl" && f.format != "m2") throw UsageError("--format must be jsonl or m2");
  const auto ds = load_dataset(f.in, f.provenance, ctx.config.lenient, ctx.err);
  const auto lines = ctx.executor.map<std::string>(ds.size(), [&](std::size_t i) {
    const auto a = analyzer.analyze(ds.pairs[i]);
    if (f.format == "jsonl") {
      nlohmann::json j = {{"index", i}, {"edits", typed_edits_json(a)}};
      if (ds.pairs[i].id) j["id"] = *ds.pairs[i].id;
      return j.dump() + "\n";
    }
    M2Record rec;
    rec.source_tokens = surfaces(a.source);
    for (std::size_t k = 0; k < a.types.size(); ++k) {
      const auto& e = a.script.edits[k];
      rec.annotations.push_back({e.src_start, e.src_end, std::string(to_string(a.types[k])), join(e.tgt_tokens), 0});
    }
    if (rec.annotations.empty()) rec.annotations.push_back({-1, -1, "noop", "", 0});
    std::ostringstream os;
    write_m2({rec}, os);
    return os.str();
  });
  emit(f.out, ctx.out, [&](std::ostream& os) {
    for (const auto& l : lines) os << l;
  });
  return 0;
}

int cmd_type_dist(const Context& ctx, const EditAnalyzer& analyzer) {
  const auto ds = load_dataset(ctx.flags.in, ctx.flags.provenance, ctx.config.lenient, ctx.err);
  const auto dist = distribution_of(ds, analyzer, ctx.executor);
  const nlohmann::json payload = {
      {"dataset", ds.provenance}, {"distribution", dist}, {"typer_rule_version", kTyperRuleVersion}};
  emit(ctx.flags.out, ctx.out,
       [&](std::ostream& os) { write_report(ErrorDistribution::kind, payload, os, report_timestamp()); });
  return 0;
}

int cmd_corrupt(const Context& ctx) {
  const auto& f = ctx.flags;
  CorruptionConfig cfg = ctx.config.corruption;
  cfg.seed = ctx.config.seed;
  cfg.validate();
  const auto rules = load_corruption_rules(ctx.config.paths);
  const auto sentences = load_sentences(f.in);
  const auto outcomes = ctx.executor.map<CorruptionOutcome>(sentences.size(), [&](std::size_t i) {
    return corrupt_with_retries(sentences[i], rules, cfg, i, kMaxCorruptionAttempts);
  });
  Dataset ds;
  for (const auto& o : outcomes)
    if (o.corrupted()) ds.pairs.push_back(o.pair);
  const std::size_t dropped = sentences.size() - ds.size();
  if (dropped) ctx.err << "gecdq: corrupt: " << dropped << " sentences left uncorrupted after retries, dropped\n";
  emit(f.out, ctx.out, [&](std::ostream& os) { write_tsv(ds, os); });
  write_sidecar(ctx, "corruption_run",
                {{"config", cfg},
                 {"seed", cfg.seed},
                 {"input", f.in},
                 {"lexicon_sha256", corruption_lexicon_hashes(ctx.config.paths)},
                 {"counts", {{"sentences", sentences.size()}, {"corrupted", ds.size()}, {"dropped", dropped}}},
                 {"max_attempts", kMaxCorruptionAttempts},
                 {"tool_version", kToolVersion}});
  return 0;
}

int cmd_build_train_set(const Context& ctx) {
  const auto& f = ctx.flags;
  const auto rules = load_corruption_rules(ctx.config.paths);
  const auto clean = load_sentences(f.clean);
  CorruptionConfig cfg = ctx.config.corruption;
  CorpusBuildStats stats;
  std::vector<LabeledPair> corpus;
  nlohmann::json source;
  if (f.contrast > 0) {
    if (!f.positives.empty() || !f.m2.empty()) throw UsageError("--contrast cannot be combined with positives");
    corpus = build_contrast_corpus(clean, f.contrast, rules, cfg, ctx.config.seed, &stats, ctx.executor);
    source = {{"kind", "contrast"}, {"per_mode", f.contrast}};
  } else {
    Dataset positives;
    if (!f.positives.empty() == !f.m2.empty()) throw UsageError("give exactly one of --positives, --m2 or --contrast");
    if (!f.positives.empty()) {
      positives = load_dataset(f.positives, "human", ctx.config.lenient, ctx.err);
      source = {{"kind", "tsv"}, {"path", f.positives}};
    } else {
      for (const auto& rec : load_m2(f.m2, ctx.config.lenient, ctx.err)) {
        auto pair = with_path(f.m2, [&] { return apply_m2(rec, f.annotator); });
        if (pair.source != pair.target) positives.pairs.push_back(std::move(pair));
      }
      source = {{"kind", "m2"}, {"path", f.m2}, {"annotator", f.annotator}};
    }
    corpus = build_classifier_corpus(positives, clean, rules, cfg, ctx.config.seed, f.allow_resample, &stats,
                                     ctx.executor);
  }
  if (stats.dropped_pairs)
    ctx.err << "gecdq: build-train-set: dropped " << stats.dropped_pairs << " matched pairs without corruption\n";
  emit(f.out, ctx.out, [&](std::ostream& os) { write_labeled_tsv(corpus, os); });
  cfg.seed = ctx.config.seed;
  write_sidecar(ctx, "training_set",
                {{"config", cfg},
                 {"seed", ctx.config.seed},
                 {"positives", source},
                 {"clean", f.clean},
                 {"allow_resample", f.allow_resample},
                 {"stats", stats},
                 {"lexicon_sha256", corruption_lexicon_hashes(ctx.config.paths)},
                 {"tool_version", kToolVersion}});
  return 0;
}

int cmd_train(const Context& ctx, const EditAnalyzer& analyzer) {
  const auto& f = ctx.flags;
  std::vector<LabeledPair> corpus;
  {
    auto in = open_input(f.in);
    corpus = with_path(f.in, [&] { return parse_labeled_tsv(in); });
  }
  const double holdout = ctx.config.holdout;
  if (!(holdout >= 0 && holdout < 1)) throw UsageError("--holdout must be in [0, 1)");
  TrainConfig tc = ctx.config.training;
  tc.seed = ctx.config.seed;

  // Held-out rows are a seeded sample so the split does not depend on file order.
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng::substream(tc.seed, ~std::uint64_t{0}).shuffle(order);
  const auto n_hold = static_cast<std::size_t>(holdout * static_cast<double>(corpus.size()));
  std::vector<LabeledPair> train_set, hold_set;
  for (std::size_t k = 0; k < order.size(); ++k)
    (k < n_hold ? hold_set : train_set).push_back(corpus[order[k]]);

  const auto train_x = make_examples(train_set, analyzer, ctx.executor);
  const auto model = train_examples(train_x, kFeatureDim, tc);
  const auto hold_x = make_examples(hold_set, analyzer, ctx.executor);
  const double train_acc = accuracy(model, train_x);
  const double hold_acc = accuracy(model, hold_x);
  ctx.err << "gecdq: train: " << train_set.size() << " training pairs, " << hold_set.size()
          << " held out; training accuracy " << train_acc << ", held-out accuracy " << hold_acc << '\n';
  emit(f.out, ctx.out, [&](std::ostream& os) { save_model(model, os); });
  if (!f.report.empty()) {
    std::ofstream r(f.report, std::ios::binary | std::ios::trunc);
    if (!r) throw DataError("cannot write '" + f.report + "'");
    write_report("training",
                 {{"n_train", train_set.size()},
                  {"n_holdout", hold_set.size()},
                  {"train_accuracy", train_acc},
                  {"holdout_accuracy", hold_set.empty() ? nlohmann::json(nullptr) : nlohmann::json(hold_acc)},
                  {"model_id", model_id(model)},
                  {"feature_schema_version", kFeatureSchemaVersion}},
                 r, report_timestamp());
  }
  return 0;
}

int cmd_score_reliability(const Context& ctx, const EditAnalyzer& analyzer) {
  const auto model = load_model_file(ctx.flags.model);
  const auto ds = load_dataset(ctx.flags.in, ctx.flags.provenance, ctx.config.lenient, ctx.err);
  const auto report = score_dataset(model, ds, analyzer, ctx.executor);
  emit(ctx.flags.out, ctx.out, [&](std::ostream& os) { write_report(report, os); });
  return 0;
}

int cmd_partition(const Context& ctx, const EditAnalyzer& analyzer) {
  const auto& f = ctx.flags;
  const auto model = load_model_file(f.model);
  const auto ds = load_dataset(f.in, f.provenance, ctx.config.lenient, ctx.err);
  const auto parts = partition(model, ds, analyzer, ctx.executor);
  emit(f.reliable_out, ctx.out, [&](std::ostream& os) { write_tsv(parts.reliable, os); });
  emit(f.unreliable_out, ctx.out, [&](std::ostream& os) { write_tsv(parts.unreliable, os); });
  const nlohmann::json payload = {{"dataset_provenance", ds.provenance},
                                  {"n_pairs", ds.size()},
                                  {"n_reliable", parts.reliable.size()},
                                  {"n_unreliable", parts.unreliable.size()},
                                  {"model_id", model_id(model)}};
  emit(f.out, ctx.out, [&](std::ostream& os) { write_report("partition", payload, os, report_timestamp()); });
  return 0;
}

int cmd_diversity(const Context& ctx, const EditAnalyzer& analyzer) {
  const auto model = load_model_file(ctx.flags.model);
  const auto ds = load_dataset(ctx.flags.in, ctx.flags.provenance, ctx.config.lenient, ctx.err);
  const auto report = diversity_report(ds, model, analyzer, ctx.executor);
  emit(ctx.flags.out, ctx.out, [&](std::ostream& os) { write_report(report, os); });
  return 0;
}

int cmd_dist_match(const Context& ctx, const EditAnalyzer& analyzer) {
  const auto& f = ctx.flags;
  const auto a = load_dataset(f.a, f.label_a, ctx.config.lenient, ctx.err);
  const auto b = load_dataset(f.b, f.label_b, ctx.config.lenient, ctx.err);
  const auto report = distribution_match(a, b, analyzer, ctx.executor);
  emit(f.out, ctx.out, [&](std::ostream& os) { write_report(report, os); });
  return 0;
}

int cmd_score_gec(const Context& ctx, const EditAnalyzer& analyzer) {
  const auto& f = ctx.flags;
  const auto hyp = load_dataset(f.hyp, "", ctx.config.lenient, ctx.err);
  const auto gold = load_m2(f.gold, ctx.config.lenient, ctx.err);
  const auto result = edit_level_score(hyp, gold, analyzer, f.annotator, ctx.executor);
  emit(f.out, ctx.out, [&](std::ostream& os) { write_report(result, os); });
  return 0;
}

std::string version_text() {
  return "gecdq " + std::string(kToolVersion) + "\nfeature_schema_version " + std::string(kFeatureSchemaVersion) +
         "\ntyper_rule_version " + std::string(kTyperRuleVersion);
}

}  // namespace

void apply_config(ToolConfig& config, std::istream& in, std::string_view source_name) {
  const auto& keys = config_keys();
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto where = std::string(source_name) + ":" + std::to_string(line_no) + ": ";
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw UsageError(where + "expected key = value");
    auto key = trim(std::string_view(text).substr(0, eq));
    auto value = trim(std::string_view(text).substr(eq + 1));
    if (!keys.contains(key)) {
      const auto names = config_key_names();
      const auto hint = suggest(key, names);
      throw UsageError(where + "unknown key '" + key + "'" + (hint.empty() ? "" : "; did you mean '" + hint + "'?"));
    }
    if (!seen.insert(key).second) throw UsageError(where + "key '" + key + "' given twice");
    entries.emplace_back(std::move(key), std::move(value));
  }
  // data_dir resets every lexicon path, so it goes first regardless of position.
  std::stable_partition(entries.begin(), entries.end(), [](const auto& e) { return e.first == "data_dir"; });
  for (const auto& [key, value] : entries) {
    try {
      keys.find(key)->second(config, value);
    } catch (const UsageError& e) {
      throw UsageError(std::string(source_name) + ": " + e.what());
    }
  }
}

std::string suggest(std::string_view wrong, std::span<const std::string> candidates) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& c : candidates) {
    const auto d = char_edit_distance(wrong, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  const std::size_t limit = std::max<std::size_t>(2, wrong.size() / 3);
  return best_d <= limit ? best : std::string();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quality metrics for synthetic grammatical error correction data", "gecdq"};
  app.set_version_flag("--version", version_text());
  app.require_subcommand(1);
  Flags f;
  Binder bind;

  auto* extract = app.add_subcommand("extract-edits", "Typed edits for every sentence pair");
  extract->add_option("--in", f.in, "Input TSV")->required();
  extract->add_option("--format", f.format, "jsonl or m2");

  auto* type_dist = app.add_subcommand("type-dist", "Error-type distribution of a corpus");
  type_dist->add_option("--in", f.in, "Input TSV")->required();

  auto* corrupt_cmd = app.add_subcommand("corrupt", "Corrupt clean sentences into (erroneous, correct) pairs");
  corrupt_cmd->add_option("--in", f.in, "Clean sentences, one per line")->required();
  bind.add(corrupt_cmd, "--mode", f.mode, "PLAUSIBLE or IMPLAUSIBLE",
           [](ToolConfig& c, const std::string& v) { c.corruption.mode = parse_mode(v); });

  auto* build = app.add_subcommand("build-train-set", "Assemble the 1:1 classifier training corpus");
  build->add_option("--positives", f.positives, "Human-annotated pairs (TSV)");
  build->add_option("--m2", f.m2, "Human-annotated corpus (M2); records without edits are skipped");
  build->add_option("--annotator", f.annotator, "M2 annotator id");
  build->add_option("--clean", f.clean, "Clean sentences to corrupt")->required();
  build->add_option("--contrast", f.contrast,
                    "Instead of positives: N plausible (RELIABLE) and N implausible (UNRELIABLE) corruptions");
  build->add_flag("--allow-resample", f.allow_resample, "Draw clean sentences with replacement when short");

  auto* train_cmd = app.add_subcommand("train", "Train the reliability classifier");
  train_cmd->add_option("--in", f.in, "Labeled TSV from build-train-set")->required();
  bind.add(train_cmd, "--epochs", f.epochs, "Training epochs", [](ToolConfig& c, int v) { c.training.epochs = v; });
  bind.add(train_cmd, "--lr", f.lr, "Learning rate", [](ToolConfig& c, double v) { c.training.learning_rate = v; });
  bind.add(train_cmd, "--l2", f.l2, "L2 strength", [](ToolConfig& c, double v) { c.training.l2 = v; });
  bind.add(train_cmd, "--threshold", f.threshold, "Decision threshold",
           [](ToolConfig& c, double v) { c.training.threshold = v; });
  bind.add(train_cmd, "--holdout", f.holdout, "Fraction held out for accuracy",
           [](ToolConfig& c, double v) { c.holdout = v; });
  train_cmd->add_option("--report", f.report, "Write a training report (accuracies) here");

  auto* score = app.add_subcommand("score-reliability", "Reliability metric of a dataset");
  score->add_option("--model", f.model, "Model file")->required();
  score->add_option("--in", f.in, "Input TSV")->required();

  auto* part = app.add_subcommand("partition", "Split a dataset into reliable and unreliable pairs");
  part->add_option("--model", f.model, "Model file")->required();
  part->add_option("--in", f.in, "Input TSV")->required();
  part->add_option("--reliable-out", f.reliable_out, "TSV for reliable pairs")->required();
  part->add_option("--unreliable-out", f.unreliable_out, "TSV for unreliable pairs")->required();

  auto* diversity = app.add_subcommand("diversity", "Diversity report before and after filtering");
  diversity->add_option("--model", f.model, "Model file")->required();
  diversity->add_option("--in", f.in, "Input TSV")->required();

  auto* dist = app.add_subcommand("dist-match", "Distribution match between two datasets");
  dist->add_option("--a", f.a, "First TSV")->required();
  dist->add_option("--b", f.b, "Second TSV")->required();
  dist->add_option("--label-a", f.label_a, "Provenance label for --a");
  dist->add_option("--label-b", f.label_b, "Provenance label for --b");

  auto* gec = app.add_subcommand("score-gec", "Edit-level precision, recall and F0.5");
  gec->add_option("--hyp", f.hyp, "TSV of source and hypothesis")->required();
  gec->add_option("--gold", f.gold, "Gold M2")->required();
  gec->add_option("--annotator", f.annotator, "Gold annotator id");

  for (auto* sub : {extract, type_dist, corrupt_cmd, build, train_cmd, score, part, diversity, dist, gec}) {
    add_common(sub, f, bind);
    if (sub == corrupt_cmd || sub == build || sub == train_cmd) add_seed(sub, f, bind);
    if (sub == corrupt_cmd || sub == build) add_corruption(sub, f, bind);
    if (sub != gec && sub != dist) sub->add_option("--provenance", f.provenance, "Dataset label for reports");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "gecdq: " << e.what() << '\n';
    if (argc > 1 && argv[1][0] != '-') {
      std::vector<std::string> names;
      for (const auto* s : app.get_subcommands({})) names.push_back(s->get_name());
      if (const auto hint = suggest(argv[1], names); !hint.empty() && hint != argv[1])
        err << "gecdq: did you mean '" << hint << "'?\n";
    }
    err << "Run with --help for usage.\n";
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (const auto extras = sub->remaining(); !extras.empty()) {
      const auto names = option_names(sub);
      std::string msg = "unexpected argument '" + extras.front() + "'";
      for (const auto& x : extras) {
        if (!x.starts_with("-")) continue;
        const auto flag = x.substr(0, x.find('='));
        msg = "unknown option '" + flag + "'";
        if (const auto hint = suggest(flag, names); !hint.empty()) msg += "; did you mean '" + hint + "'?";
        break;
      }
      throw UsageError(msg);
    }

    ToolConfig config;
    std::string config_path = f.config;
    if (config_path.empty())
      if (const char* env = std::getenv(std::string(kConfigEnv).c_str()); env && *env) config_path = env;
    if (!config_path.empty()) {
      auto in = open_input(config_path);
      apply_config(config, in, config_path);
    }
    if (!f.data_dir.empty()) config.paths = ResourcePaths::in(f.data_dir);
    bind.apply(config);
    if (config.threads < 1) throw UsageError("--threads must be >= 1");

    Context ctx{config, f, out, err, Executor(config.threads)};
    const std::string name = sub->get_name();
    if (name == "corrupt") return cmd_corrupt(ctx);
    if (name == "build-train-set") return cmd_build_train_set(ctx);

    const auto resources = load_language_resources(config.paths);
    const EditAnalyzer analyzer(resources, config.costs);
    if (name == "extract-edits") return cmd_extract_edits(ctx, analyzer);
    if (name == "type-dist") return cmd_type_dist(ctx, analyzer);
    if (name == "train") return cmd_train(ctx, analyzer);
    if (name == "score-reliability") return cmd_score_reliability(ctx, analyzer);
    if (name == "partition") return cmd_partition(ctx, analyzer);
    if (name == "diversity") return cmd_diversity(ctx, analyzer);
    if (name == "dist-match") return cmd_dist_match(ctx, analyzer);
    if (name == "score-gec") return cmd_score_gec(ctx, analyzer);
    throw UsageError("unknown subcommand '" + name + "'");
  } catch (const UsageError& e) {
    err << "gecdq: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    err << "gecdq: error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "gecdq: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "gecdq: error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace gecdq::cli
