#include <algorithm>
#include <cmath>

#include "gecdq/edit_extraction.hpp"
#include "gecdq/errors.hpp"

namespace gecdq {

namespace {

constexpr double kEps = 1e-9;

enum class Move : unsigned char { Diagonal, Delete, Insert };

struct Column {
  Move move;
  int i;  // source index consumed (Diagonal/Delete)
  int j;  // target index consumed (Diagonal/Insert)
  bool match;
};

}  // namespace

double substitution_cost(const Token& a, const Token& b, const AlignCosts& costs,
                         const VerbLexicon* verbs) {
  if (a.surface == b.surface) return 0.0;
  if (a.lower == b.lower) return costs.related;
  if (verbs && verbs->same_group(a.lower, b.lower)) return costs.related;
  if (normalized_char_distance(a.lower, b.lower) < costs.char_threshold) return costs.orthographic;
  return costs.substitution;
}

EditScript align(std::span<const Token> source, std::span<const Token> target, const AlignCosts& costs,
                 const VerbLexicon* verbs) {
  const int n = static_cast<int>(source.size());
  const int m = static_cast<int>(target.size());
  const auto at = [m](int i, int j) { return static_cast<std::size_t>(i) * (m + 1) + j; };

  std::vector<double> dp(static_cast<std::size_t>(n + 1) * (m + 1));
  std::vector<double> sub(static_cast<std::size_t>(n + 1) * (m + 1), 0.0);
  for (int i = 0; i <= n; ++i) dp[at(i, 0)] = i * costs.indel;
  for (int j = 0; j <= m; ++j) dp[at(0, j)] = j * costs.indel;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      const double s = substitution_cost(source[i - 1], target[j - 1], costs, verbs);
      sub[at(i, j)] = s;
      dp[at(i, j)] = std::min({dp[at(i - 1, j - 1)] + s, dp[at(i - 1, j)] + costs.indel,
                               dp[at(i, j - 1)] + costs.indel});
    }
  }

  std::vector<Column> columns;
  columns.reserve(n + m);
  for (int i = n, j = m; i > 0 || j > 0;) {
    const double here = dp[at(i, j)];
    if (i > 0 && j > 0 && std::abs(dp[at(i - 1, j - 1)] + sub[at(i, j)] - here) < kEps) {
      columns.push_back({Move::Diagonal, i - 1, j - 1, sub[at(i, j)] == 0.0});
      --i;
      --j;
    } else if (i > 0 && std::abs(dp[at(i - 1, j)] + costs.indel - here) < kEps) {
      columns.push_back({Move::Delete, i - 1, j, false});
      --i;
    } else {
      columns.push_back({Move::Insert, i, j - 1, false});
      --j;
    }
  }
  std::reverse(columns.begin(), columns.end());

  EditScript script;
  script.source_len = n;
  script.target_len = m;
  script.cost = dp[at(n, m)];

  // Column k starts at source position `si` and target position `tj`.
  int si = 0;
  int tj = 0;
  std::size_t k = 0;
  while (k < columns.size()) {
    if (columns[k].match) {
      ++si;
      ++tj;
      ++k;
      continue;
    }
    Edit e;
    e.src_start = si;
    e.tgt_start = tj;
    while (k < columns.size() && !columns[k].match) {
      if (columns[k].move == Move::Diagonal) e.substitutions.emplace_back(si, tj);
      if (columns[k].move != Move::Insert) ++si;
      if (columns[k].move != Move::Delete) ++tj;
      ++k;
    }
    e.src_end = si;
    e.tgt_end = tj;
    for (int x = e.src_start; x < e.src_end; ++x) e.src_tokens.push_back(source[x].surface);
    for (int x = e.tgt_start; x < e.tgt_end; ++x) e.tgt_tokens.push_back(target[x].surface);
    script.edits.push_back(std::move(e));
  }
  return script;
}

std::vector<std::string> apply(const EditScript& script, std::span<const std::string> source) {
  if (static_cast<int>(source.size()) != script.source_len)
    throw ValidationError("edit script expects " + std::to_string(script.source_len) + " source tokens, got " +
                          std::to_string(source.size()));
  std::vector<std::string> out(source.begin(), source.end());
  for (auto it = script.edits.rbegin(); it != script.edits.rend(); ++it) {
    out.erase(out.begin() + it->src_start, out.begin() + it->src_end);
    out.insert(out.begin() + it->src_start, it->tgt_tokens.begin(), it->tgt_tokens.end());
  }
  return out;
}

EditCountStats edit_count_stats(const EditScript& script) {
  int covered = 0;
  for (const auto& e : script.edits) covered += e.src_end - e.src_start;
  return {static_cast<int>(script.edits.size()),
          static_cast<double>(covered) / std::max(script.source_len, 1)};
}

}  // namespace gecdq
