#include "knowcert/corpus.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "knowcert/text.hpp"

namespace knowcert {

namespace {

constexpr std::string_view kNegPrefix = "NEG_";
constexpr std::array<std::string_view, 12> kMonths = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

// Thrown by the row decoders; turned into a Diagnostic (or a FormatError in
// strict mode) by the driver loop.
struct RowProblem {
  std::string message;
};

// Shared driver: validates the header, then hands each non-blank row, already
// split into fields, to `decode`. `last_absorbs` lets the final column keep
// any extra delimiters (free text).
template <typename Record, typename Decode>
ParseResult<Record> parse_rows(std::istream& in, const FormatSpec& format,
                               std::string_view header, bool last_absorbs,
                               Decode&& decode) {
  ParseResult<Record> result;
  const auto expected = text::split(header, '\t');
  const size_t columns = expected.size();

  std::string line;
  size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!seen_header) {
      if (text::trim(line).empty()) continue;
      auto got = text::split(line, format.field_delimiter);
      if (got.size() != columns) {
        throw FormatError(line_no,
                          fmt::format("header has {} columns, expected {}",
                                      got.size(), columns));
      }
      for (size_t i = 0; i < columns; ++i) {
        if (text::trim(got[i]) != expected[i]) {
          throw FormatError(line_no,
                            fmt::format("header column {} is '{}', expected '{}'",
                                        i + 1, text::trim(got[i]), expected[i]));
        }
      }
      seen_header = true;
      continue;
    }
    if (text::trim(line).empty()) continue;

    auto fields = text::split(line, format.field_delimiter);
    if (last_absorbs && fields.size() > columns) {
      const char* tail_begin = fields[columns - 1].data();
      fields.resize(columns);
      fields.back() = std::string_view(
          tail_begin, static_cast<size_t>(line.data() + line.size() - tail_begin));
    }
    try {
      if (fields.size() != columns) {
        throw RowProblem{fmt::format("expected {} columns, got {}", columns,
                                     fields.size())};
      }
      decode(fields, line_no, result);
    } catch (const RowProblem& problem) {
      if (format.strict) throw FormatError(line_no, problem.message);
      result.errors.push_back({line_no, problem.message});
    }
  }
  return result;
}

std::string required(std::string_view field, std::string_view name) {
  auto value = text::trim(field);
  if (value.empty()) throw RowProblem{fmt::format("empty {}", name)};
  return std::string(value);
}

Concept decode_concept(std::string_view cui, std::string_view name,
                       std::string_view semtypes, char list_delim,
                       std::string_view role) {
  Concept c;
  c.cui = required(cui, fmt::format("{} CUI", role));
  c.preferred_name = std::string(text::trim(name));
  for (auto& code : text::split_list(semtypes, list_delim)) {
    c.semantic_types.insert(std::move(code));
  }
  if (c.semantic_types.empty()) {
    throw RowProblem{fmt::format("{} has no semantic types", role)};
  }
  return c;
}

std::string join_set(const std::set<std::string>& values, char delim) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += delim;
    out += v;
  }
  return out;
}

}  // namespace

FormatError::FormatError(std::size_t line, const std::string& message)
    : std::runtime_error(fmt::format("line {}: {}", line, message)),
      line_(line) {}

Predicate Predicate::parse(std::string_view raw) {
  std::string upper = text::to_upper(text::trim(raw));
  Predicate p;
  std::string_view rest = upper;
  if (rest.starts_with(kNegPrefix)) {
    p.negated = true;
    rest.remove_prefix(kNegPrefix.size());
  }
  if (rest.empty()) {
    throw std::invalid_argument(fmt::format("empty predicate in '{}'", raw));
  }
  if (rest.starts_with(kNegPrefix)) {
    throw std::invalid_argument(fmt::format("doubly negated predicate '{}'", raw));
  }
  p.base = std::string(rest);
  return p;
}

std::string_view location_code(SentenceLocation loc) {
  return loc == SentenceLocation::title ? "ti" : "ab";
}

std::optional<SentenceLocation> parse_location(std::string_view code) {
  code = text::trim(code);
  if (code == "ti") return SentenceLocation::title;
  if (code == "ab") return SentenceLocation::abstract;
  return std::nullopt;
}

std::optional<PubDate> parse_pub_date(std::string_view field) {
  auto parts = text::split_list(field, ' ');
  if (parts.empty()) return std::nullopt;
  if (parts[0].size() != 4) return std::nullopt;
  auto year = text::parse_int(parts[0]);
  if (!year || *year < 1800 || *year > 2100) return std::nullopt;
  PubDate date;
  date.year = static_cast<int>(*year);
  if (parts.size() > 1 && parts[1].size() >= 3) {
    std::string prefix = text::to_lower(std::string_view(parts[1]).substr(0, 3));
    for (size_t m = 0; m < kMonths.size(); ++m) {
      if (text::to_lower(kMonths[m]) == prefix) {
        date.month = static_cast<int>(m + 1);
        break;
      }
    }
  }
  return date;
}

std::string format_pub_date(std::optional<int> year, std::optional<int> month) {
  if (!year) return "";
  if (month && *month >= 1 && *month <= 12) {
    return fmt::format("{} {}", *year, kMonths[static_cast<size_t>(*month - 1)]);
  }
  return std::to_string(*year);
}

ParseResult<PredicationRecord> parse_predications(std::istream& in,
                                                  const FormatSpec& format) {
  return parse_rows<PredicationRecord>(
      in, format, kPredicationsHeader, false,
      [&](const std::vector<std::string_view>& f, size_t,
          ParseResult<PredicationRecord>& out) {
        PredicationRecord r;
        r.predication_id = required(f[0], "PREDICATION_ID");
        r.sentence_id = required(f[1], "SENTENCE_ID");
        r.article_id = required(f[2], "PMID");
        try {
          r.predicate = Predicate::parse(f[3]);
        } catch (const std::invalid_argument& e) {
          throw RowProblem{e.what()};
        }
        r.subject = decode_concept(f[4], f[5], f[6], format.list_delimiter,
                                   "subject");
        r.object = decode_concept(f[7], f[8], f[9], format.list_delimiter,
                                  "object");
        out.records.push_back(std::move(r));
      });
}

ParseResult<SentenceRecord> parse_sentences(std::istream& in,
                                            const FormatSpec& format) {
  return parse_rows<SentenceRecord>(
      in, format, kSentencesHeader, true,
      [&](const std::vector<std::string_view>& f, size_t,
          ParseResult<SentenceRecord>& out) {
        SentenceRecord s;
        s.sentence_id = required(f[0], "SENTENCE_ID");
        s.article_id = required(f[1], "PMID");
        auto loc = parse_location(f[2]);
        if (!loc) {
          throw RowProblem{fmt::format("unknown LOCATION '{}' (expected ti or ab)",
                                       text::trim(f[2]))};
        }
        s.location = *loc;
        auto ordinal = text::parse_int(f[3]);
        if (!ordinal || *ordinal < 0 || *ordinal > UINT32_MAX) {
          throw RowProblem{fmt::format("bad ORDINAL '{}'", text::trim(f[3]))};
        }
        s.ordinal = static_cast<std::uint32_t>(*ordinal);
        s.text = required(f[4], "TEXT");
        out.records.push_back(std::move(s));
      });
}

ParseResult<ArticleMetadata> parse_metadata(std::istream& in,
                                            const FormatSpec& format) {
  return parse_rows<ArticleMetadata>(
      in, format, kArticlesHeader, false,
      [&](const std::vector<std::string_view>& f, size_t line_no,
          ParseResult<ArticleMetadata>& out) {
        ArticleMetadata a;
        a.article_id = required(f[0], "PMID");
        auto date_field = text::trim(f[1]);
        if (date_field.empty()) {
          // undated article
        } else if (auto date = parse_pub_date(date_field)) {
          a.pub_year = date->year;
          a.pub_month = date->month;
          if (!date->month && date_field.find(' ') != std::string_view::npos) {
            out.warnings.push_back(
                {line_no, fmt::format("unrecognized month in PUB_DATE '{}'",
                                      date_field)});
          }
        } else {
          out.warnings.push_back(
              {line_no, fmt::format("unparseable PUB_DATE '{}'; year left empty",
                                    date_field)});
        }
        for (auto& pt : text::split_list(f[2], format.list_delimiter)) {
          a.publication_types.insert(std::move(pt));
        }
        for (auto& mh : text::split_list(f[3], format.list_delimiter)) {
          a.mesh_headings.insert(std::move(mh));
        }
        out.records.push_back(std::move(a));
      });
}

ClaimCorpus link(std::vector<PredicationRecord> predications,
                 std::vector<SentenceRecord> sentences,
                 std::vector<ArticleMetadata> metadata, bool strict) {
  ClaimCorpus corpus;
  for (auto& s : sentences) {
    std::string id = s.sentence_id;
    if (!corpus.sentences.emplace(id, std::move(s)).second) {
      throw LinkError(fmt::format("duplicate sentence id '{}'", id));
    }
  }
  for (auto& a : metadata) {
    std::string id = a.article_id;
    if (!corpus.articles.emplace(id, std::move(a)).second) {
      throw LinkError(fmt::format("duplicate article id '{}'", id));
    }
  }

  std::unordered_set<std::string> seen_ids;
  seen_ids.reserve(predications.size());
  corpus.predications.reserve(predications.size());
  for (auto& p : predications) {
    std::string reason;
    auto sentence = corpus.sentences.find(p.sentence_id);
    if (!seen_ids.insert(p.predication_id).second) {
      reason = "duplicate predication id";
    } else if (sentence == corpus.sentences.end()) {
      reason = fmt::format("missing sentence '{}'", p.sentence_id);
    } else if (!corpus.articles.contains(p.article_id)) {
      reason = fmt::format("missing article '{}'", p.article_id);
    } else if (sentence->second.article_id != p.article_id) {
      reason = fmt::format("sentence '{}' belongs to article '{}', not '{}'",
                           p.sentence_id, sentence->second.article_id,
                           p.article_id);
    }
    if (reason.empty()) {
      corpus.predications.push_back(std::move(p));
    } else if (strict) {
      throw LinkError(fmt::format("predication '{}': {}", p.predication_id, reason));
    } else {
      corpus.quarantine.push_back({std::move(p), std::move(reason)});
    }
  }
  return corpus;
}

void write_predications(std::ostream& out,
                        const std::vector<PredicationRecord>& records) {
  out << kPredicationsHeader << '\n';
  for (const auto& r : records) {
    out << r.predication_id << '\t' << r.sentence_id << '\t' << r.article_id
        << '\t' << r.predicate.raw() << '\t' << r.subject.cui << '\t'
        << r.subject.preferred_name << '\t' << join_set(r.subject.semantic_types, ',')
        << '\t' << r.object.cui << '\t' << r.object.preferred_name << '\t'
        << join_set(r.object.semantic_types, ',') << '\n';
  }
}

void write_sentences(std::ostream& out,
                     const std::vector<SentenceRecord>& records) {
  out << kSentencesHeader << '\n';
  for (const auto& s : records) {
    out << s.sentence_id << '\t' << s.article_id << '\t'
        << location_code(s.location) << '\t' << s.ordinal << '\t' << s.text
        << '\n';
  }
}

void write_metadata(std::ostream& out,
                    const std::vector<ArticleMetadata>& records) {
  out << kArticlesHeader << '\n';
  for (const auto& a : records) {
    out << a.article_id << '\t' << format_pub_date(a.pub_year, a.pub_month)
        << '\t' << join_set(a.publication_types, '|') << '\t'
        << join_set(a.mesh_headings, '|') << '\n';
  }
}

}  // namespace knowcert
