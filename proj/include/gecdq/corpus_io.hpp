#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace gecdq {

/// An erroneous source sentence paired with its correction.
struct SentencePair {
  std::string source;
  std::string target;
  std::optional<std::string> id;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

struct Dataset {
  std::vector<SentencePair> pairs;
  std::string provenance;

  std::size_t size() const noexcept { return pairs.size(); }
  bool empty() const noexcept { return pairs.empty(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct ParseIssue {
  std::size_t line;
  std::string message;
};

/// Strict mode (default) throws on the first bad record. Lenient mode skips
/// bad records and, when `issues` is set, appends one entry per skipped record.
struct ParseOptions {
  bool lenient = false;
  std::vector<ParseIssue>* issues = nullptr;
};

/// Throws EncodingError with the absolute offset of the first bad byte.
void validate_utf8(std::string_view bytes, std::size_t base_offset = 0);

/// One record per line: source TAB target [TAB id]. Blank lines are skipped.
Dataset parse_tsv(std::istream& in, const ParseOptions& options = {});
void write_tsv(const Dataset& dataset, std::ostream& out);
/// Throws ValidationError if the pair cannot be represented in TSV.
void validate_pair(const SentencePair& pair);

/// Plain text, one sentence per line; '#' comment lines and blank lines skipped.
std::vector<std::string> read_lines(std::istream& in);

// ---------------------------------------------------------------------------
// M2

struct M2Annotation {
  int start = 0;
  int end = 0;
  std::string type;
  std::string correction;  // "-NONE-" is normalised to the empty string
  int annotator = 0;

  bool is_noop() const noexcept { return (start == -1 && end == -1) || type == "noop"; }
  friend bool operator==(const M2Annotation&, const M2Annotation&) = default;
};

struct M2Record {
  std::vector<std::string> source_tokens;
  std::vector<M2Annotation> annotations;

  friend bool operator==(const M2Record&, const M2Record&) = default;
};

std::vector<M2Record> parse_m2(std::istream& in, const ParseOptions& options = {});
void write_m2(const std::vector<M2Record>& records, std::ostream& out);

/// Applies one annotator's corrections. Throws ValidationError on overlapping
/// spans or when the annotator is absent from a record with real edits.
SentencePair apply_m2(const M2Record& record, int annotator = 0);

// ---------------------------------------------------------------------------
// Reports

inline constexpr std::string_view kReportSchemaVersion = "1";

/// ISO-8601 UTC timestamp. Honours SOURCE_DATE_EPOCH for reproducible output.
std::string report_timestamp();

/// Writes {schema_version, kind, created_utc, payload} with sorted keys.
void write_report(std::string_view kind, const nlohmann::json& payload, std::ostream& out,
                  std::string_view created_utc);

/// Any type with a static `kind` and an ADL-visible `to_json`.
template <class Report>
void write_report(const Report& report, std::ostream& out,
                  const std::optional<std::string>& created_utc = std::nullopt) {
  nlohmann::json payload = report;
  write_report(Report::kind, payload, out, created_utc ? *created_utc : report_timestamp());
}

}  // namespace gecdq
