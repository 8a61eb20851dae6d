#include "gecdq/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>

#include "gecdq/errors.hpp"

namespace gecdq {

namespace {

std::string_view rtrim(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + sep.size();
  }
  return parts;
}

/// Reads lines while tracking line numbers and byte offsets.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    offset_ = next_offset_;
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    next_offset_ += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::size_t line_no() const { return line_no_; }
  std::size_t offset() const { return offset_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
  std::size_t offset_ = 0;
  std::size_t next_offset_ = 0;
};

// Runs `body`; in lenient mode a DataError skips the record instead of aborting.
template <class Fn>
bool guarded(const ParseOptions& opt, std::size_t line_no, Fn&& body) {
  try {
    body();
    return true;
  } catch (const DataError& e) {
    if (!opt.lenient) throw;
    if (opt.issues) opt.issues->push_back({line_no, e.what()});
    return false;
  }
}

int parse_int(std::string_view s, std::size_t line_no) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParseError(line_no, "expected an integer, got '" + std::string(s) + "'");
  return value;
}

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  for (auto part : split(s, " "))
    if (!part.empty()) out.emplace_back(part);
  return out;
}

}  // namespace

void validate_utf8(std::string_view bytes, std::size_t base_offset) {
  std::size_t i = 0;
  while (i < bytes.size()) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      throw EncodingError(base_offset + i);
    }
    if (i + len > bytes.size()) throw EncodingError(base_offset + i);
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) throw EncodingError(base_offset + i + k);
      cp = (cp << 6) | (cc & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) throw EncodingError(base_offset + i);
    i += len;
  }
}

void validate_pair(const SentencePair& pair) {
  if (rtrim(pair.source).empty()) throw ValidationError("empty source sentence");
  if (rtrim(pair.target).empty()) throw ValidationError("empty target sentence");
  auto bad = [](std::string_view s) { return s.find_first_of("\t\n") != std::string_view::npos; };
  if (bad(pair.source) || bad(pair.target) || (pair.id && bad(*pair.id)))
    throw ValidationError("tab or newline inside a TSV field");
}

Dataset parse_tsv(std::istream& in, const ParseOptions& options) {
  Dataset ds;
  LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    if (rtrim(line).empty()) continue;
    guarded(options, reader.line_no(), [&] {
      validate_utf8(line, reader.offset());
      const auto cols = split(line, "\t");
      if (cols.size() < 2) throw ParseError(reader.line_no(), "expected 2 columns");
      if (cols.size() > 3) throw ParseError(reader.line_no(), "expected at most 3 columns");
      SentencePair p{std::string(rtrim(cols[0])), std::string(rtrim(cols[1])), std::nullopt};
      if (cols.size() == 3) p.id = std::string(rtrim(cols[2]));
      try {
        validate_pair(p);
      } catch (const ValidationError& e) {
        throw ParseError(reader.line_no(), e.what());
      }
      ds.pairs.push_back(std::move(p));
    });
  }
  return ds;
}

void write_tsv(const Dataset& dataset, std::ostream& out) {
  for (const auto& p : dataset.pairs) {
    validate_pair(p);
    out << p.source << '\t' << p.target;
    if (p.id) out << '\t' << *p.id;
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed to write TSV output");
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    validate_utf8(line, reader.offset());
    const auto t = rtrim(line);
    if (t.empty() || t.front() == '#') continue;
    lines.emplace_back(t);
  }
  return lines;
}

std::vector<M2Record> parse_m2(std::istream& in, const ParseOptions& options) {
  std::vector<M2Record> records;
  bool open = false;       // a record is accepting A-lines
  bool skipping = false;   // lenient mode dropped the current S-line
  LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    const auto text = rtrim(line);
    if (text.empty()) {
      open = false;
      skipping = false;
      continue;
    }
    const bool s_line = text.starts_with("S ") || text == "S";
    const bool ok = guarded(options, reader.line_no(), [&] {
      validate_utf8(line, reader.offset());
      const std::size_t ln = reader.line_no();
      if (s_line) {
        records.push_back({split_tokens(text.substr(1)), {}});
        open = true;
        skipping = false;
        return;
      }
      if (text.starts_with("A ")) {
        if (skipping) return;
        if (!open) throw ParseError(ln, "annotation before sentence");
        const auto fields = split(text.substr(2), "|||");
        if (fields.size() < 3) throw ParseError(ln, "annotation needs span|||type|||correction");
        const auto span = split_tokens(fields[0]);
        if (span.size() != 2) throw ParseError(ln, "annotation span needs two integers");
        M2Annotation a;
        a.start = parse_int(span[0], ln);
        a.end = parse_int(span[1], ln);
        a.type = std::string(fields[1]);
        a.correction = fields[2] == "-NONE-" ? std::string() : std::string(fields[2]);
        a.annotator = fields.size() >= 4 ? parse_int(rtrim(fields.back()), ln) : 0;
        auto& rec = records.back();
        const int n = static_cast<int>(rec.source_tokens.size());
        if (!(a.start == -1 && a.end == -1)) {
          if (a.end < a.start)
            throw ParseError(ln, "span end " + std::to_string(a.end) + " < start " + std::to_string(a.start));
          if (a.start < 0 || a.end > n)
            throw ParseError(ln, "span (" + std::to_string(a.start) + "," + std::to_string(a.end) +
                                     ") outside sentence of " + std::to_string(n) + " tokens");
        }
        if (a.annotator < 0) throw ParseError(ln, "negative annotator id");
        rec.annotations.push_back(std::move(a));
        return;
      }
      throw ParseError(ln, "expected an 'S' or 'A' line");
    });
    // A rejected S-line must not leave its A-lines attached to the previous record.
    if (!ok && s_line) {
      open = false;
      skipping = true;
    }
  }
  return records;
}

void write_m2(const std::vector<M2Record>& records, std::ostream& out) {
  for (const auto& r : records) {
    out << 'S';
    for (const auto& t : r.source_tokens) out << ' ' << t;
    out << '\n';
    for (const auto& a : r.annotations) {
      out << "A " << a.start << ' ' << a.end << "|||" << a.type << "|||"
          << (a.is_noop() && a.correction.empty() ? "-NONE-" : a.correction) << "|||REQUIRED|||-NONE-|||"
          << a.annotator << '\n';
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed to write M2 output");
}

SentencePair apply_m2(const M2Record& record, int annotator) {
  std::vector<const M2Annotation*> edits;
  bool annotator_seen = false;
  bool has_real_edits = false;
  for (const auto& a : record.annotations) {
    if (a.annotator == annotator) annotator_seen = true;
    if (a.is_noop()) continue;
    has_real_edits = true;
    if (a.annotator == annotator) edits.push_back(&a);
  }
  if (!annotator_seen && has_real_edits)
    throw ValidationError("annotator " + std::to_string(annotator) + " not present in record");

  std::sort(edits.begin(), edits.end(), [](const M2Annotation* a, const M2Annotation* b) {
    return a->start != b->start ? a->start > b->start : a->end > b->end;
  });
  for (std::size_t i = 0; i + 1 < edits.size(); ++i) {
    const auto& r = *edits[i];      // right
    const auto& l = *edits[i + 1];  // left
    const bool overlap = (l.start < r.end && r.start < l.end) ||
                         (l.start == l.end && r.start == r.end && l.start == r.start);
    if (overlap)
      throw ValidationError("overlapping annotations (" + std::to_string(l.start) + "," + std::to_string(l.end) +
                            ") and (" + std::to_string(r.start) + "," + std::to_string(r.end) + ")");
  }

  std::vector<std::string> tokens = record.source_tokens;
  for (const auto* a : edits) {
    const auto repl = split_tokens(a->correction);
    tokens.erase(tokens.begin() + a->start, tokens.begin() + a->end);
    tokens.insert(tokens.begin() + a->start, repl.begin(), repl.end());
  }
  auto join = [](const std::vector<std::string>& ws) {
    std::string s;
    for (const auto& w : ws) {
      if (!s.empty()) s += ' ';
      s += w;
    }
    return s;
  };
  return {join(record.source_tokens), join(tokens), std::nullopt};
}

std::string report_timestamp() {
  using namespace std::chrono;
  sys_seconds now = floor<seconds>(system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    long long secs = 0;
    const std::string_view sv(epoch);
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), secs);
    if (ec == std::errc{} && ptr == sv.data() + sv.size()) now = sys_seconds{seconds{secs}};
  }
  const std::time_t t = now.time_since_epoch().count();
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_report(std::string_view kind, const nlohmann::json& payload, std::ostream& out,
                  std::string_view created_utc) {
  nlohmann::json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["kind"] = kind;
  doc["created_utc"] = created_utc;
  doc["payload"] = payload;
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed to write report");
}

}  // namespace gecdq
