#include "gecdq/resources.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "gecdq/errors.hpp"
#include "gecdq/hashing.hpp"

#ifndef GECDQ_DATA_DIR
#define GECDQ_DATA_DIR "data"
#endif

namespace gecdq {

namespace {

template <class Fn>
auto load(const std::string& path, Fn&& parse) {
  std::istringstream in(read_file(path));
  try {
    return parse(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace

ResourcePaths ResourcePaths::in(const std::string& dir) {
  return {dir + "/verbs.txt",      dir + "/confusions.txt", dir + "/insertions.txt",       dir + "/deletions.txt",
          dir + "/dictionary.txt", dir + "/nouns_irregular.txt", dir + "/adjectives.txt"};
}

std::string bundled_data_dir() { return GECDQ_DATA_DIR; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

LanguageResources load_language_resources(const ResourcePaths& p) {
  LanguageResources r;
  r.verbs = FormLexicon(load(p.verbs, [](std::istream& in) { return load_verb_lexicon(in); }));
  r.nouns = FormLexicon(load(p.nouns, [](std::istream& in) { return load_verb_lexicon(in); }));
  r.adjectives = FormLexicon(load(p.adjectives, [](std::istream& in) { return load_verb_lexicon(in); }));
  const auto words = load(p.dictionary, [](std::istream& in) { return load_wordlist(in); });
  r.dictionary = WordSet(words);
  return r;
}

CorruptionRuleSet load_corruption_rules(const ResourcePaths& p) {
  auto verbs = load(p.verbs, [](std::istream& in) { return load_verb_lexicon(in); });
  auto confusions = load(p.confusions, [](std::istream& in) { return load_confusion_lexicon(in); });
  auto insertions = load(p.insertions, [](std::istream& in) { return load_wordlist(in); });
  auto deletions = load(p.deletions, [](std::istream& in) { return load_wordlist(in); });
  return CorruptionRuleSet(std::move(verbs), std::move(confusions), std::move(insertions), std::move(deletions));
}

nlohmann::json corruption_lexicon_hashes(const ResourcePaths& p) {
  return {{"verbs", sha256_hex(read_file(p.verbs))},
          {"confusions", sha256_hex(read_file(p.confusions))},
          {"insertions", sha256_hex(read_file(p.insertions))},
          {"deletions", sha256_hex(read_file(p.deletions))}};
}

}  // namespace gecdq
