#pragma once

#include <string>

#include "gecdq/corruption.hpp"
#include "gecdq/text_analysis.hpp"
#include "json.hpp"

namespace gecdq {

struct ResourcePaths {
  std::string verbs;
  std::string confusions;
  std::string insertions;
  std::string deletions;
  std::string dictionary;
  std::string nouns;
  std::string adjectives;

  /// The bundled lexicons under `data_dir`.
  static ResourcePaths in(const std::string& data_dir);
};

/// Compile-time location of the bundled lexicons.
std::string bundled_data_dir();

/// Whole file as bytes; DataError naming the path when it cannot be read.
std::string read_file(const std::string& path);

/// Load failures are rethrown as DataError prefixed with the file path.
LanguageResources load_language_resources(const ResourcePaths& paths);
CorruptionRuleSet load_corruption_rules(const ResourcePaths& paths);

/// {"verbs": sha256, ...} over the four corruption lexicons' bytes.
nlohmann::json corruption_lexicon_hashes(const ResourcePaths& paths);

}  // namespace gecdq
