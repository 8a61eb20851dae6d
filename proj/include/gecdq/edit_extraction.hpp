#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gecdq/text_analysis.hpp"

namespace gecdq {

/// A contiguous rewrite source[src_start, src_end) -> target[tgt_start, tgt_end).
struct Edit {
  int src_start = 0;
  int src_end = 0;
  int tgt_start = 0;
  int tgt_end = 0;
  std::vector<std::string> src_tokens;
  std::vector<std::string> tgt_tokens;
  /// (source index, target index) of the substitution columns inside the edit.
  std::vector<std::pair<int, int>> substitutions;

  bool is_insertion() const noexcept { return src_start == src_end; }
  bool is_deletion() const noexcept { return tgt_start == tgt_end; }
  friend bool operator==(const Edit&, const Edit&) = default;
};

struct EditScript {
  std::vector<Edit> edits;
  int source_len = 0;
  int target_len = 0;
  /// Total cost of the alignment that produced the edits.
  double cost = 0.0;
};

/// Alignment cost constants. The defaults are the frozen configuration.
struct AlignCosts {
  double related = 0.6;            // same verb-form group, or case-only difference
  double orthographic = 0.8;       // normalized character distance below threshold
  double char_threshold = 0.5;
  double indel = 1.0;
  double substitution = 1.0;
};

/// Substitution cost between two tokens; 0 only for identical surfaces.
double substitution_cost(const Token& a, const Token& b, const AlignCosts& costs,
                         const VerbLexicon* verbs);

/// Minimum-cost alignment; maximal runs of non-match columns become one Edit.
/// Ties prefer substitution, then deletion, then insertion.
EditScript align(std::span<const Token> source, std::span<const Token> target,
                 const AlignCosts& costs = {}, const VerbLexicon* verbs = nullptr);

/// Rewrites `source` into the script's target. Throws ValidationError when the
/// script was built for a different source length.
std::vector<std::string> apply(const EditScript& script, std::span<const std::string> source);

struct EditCountStats {
  int n_edits = 0;
  double edited_token_fraction = 0.0;
};

EditCountStats edit_count_stats(const EditScript& script);

}  // namespace gecdq
