#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gecdq/classifier.hpp"
#include "gecdq/corruption.hpp"
#include "gecdq/edit_extraction.hpp"
#include "gecdq/resources.hpp"

namespace gecdq::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kConfigEnv = "GEC_DATAQ_CONFIG";

/// Bad flags, subcommands or config keys. Exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ToolConfig {
  ResourcePaths paths = ResourcePaths::in(bundled_data_dir());
  AlignCosts costs;
  CorruptionConfig corruption;
  TrainConfig training;
  double holdout = 0.2;
  int threads = 1;
  std::uint64_t seed = 0;
  bool lenient = false;
};

/// Flat "key = value" lines; '#' starts a comment line. Unknown keys and
/// repeated keys are usage errors; unparsable values too.
void apply_config(ToolConfig& config, std::istream& in, std::string_view source_name = "config");

/// Closest candidate by character edit distance, or empty when nothing is close.
std::string suggest(std::string_view wrong, std::span<const std::string> candidates);

/// Entry point. Returns 0 on success, 1 on usage errors, 2 on data errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gecdq::cli
