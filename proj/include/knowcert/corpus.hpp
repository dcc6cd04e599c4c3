// Claim corpus: predications, their source sentences and article metadata,
// parsed from SemMedDB-shaped TSV exports and cross-linked.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace knowcert {

struct Concept {
  std::string cui;
  std::string preferred_name;
  std::set<std::string> semantic_types;

  friend bool operator==(const Concept&, const Concept&) = default;
};

// A SemRep predicate split into its base name and negation flag.
// `base` is upper-case and never starts with "NEG_".
struct Predicate {
  std::string base;
  bool negated = false;

  // Upper-cases `raw` and strips a single "NEG_" prefix. Throws
  // std::invalid_argument for an empty base or a doubly negated name.
  static Predicate parse(std::string_view raw);

  std::string raw() const { return negated ? "NEG_" + base : base; }

  friend bool operator==(const Predicate&, const Predicate&) = default;
  friend auto operator<=>(const Predicate&, const Predicate&) = default;
};

struct PredicationRecord {
  std::string predication_id;
  std::string sentence_id;
  std::string article_id;
  Concept subject;
  Predicate predicate;
  Concept object;

  friend bool operator==(const PredicationRecord&,
                         const PredicationRecord&) = default;
};

enum class SentenceLocation : std::uint8_t { title, abstract };

std::string_view location_code(SentenceLocation loc);
std::optional<SentenceLocation> parse_location(std::string_view code);

struct SentenceRecord {
  std::string sentence_id;
  std::string article_id;
  SentenceLocation location = SentenceLocation::abstract;
  std::uint32_t ordinal = 0;
  std::string text;

  friend bool operator==(const SentenceRecord&, const SentenceRecord&) = default;
};

struct ArticleMetadata {
  std::string article_id;
  std::optional<int> pub_year;
  std::optional<int> pub_month;
  std::set<std::string> publication_types;
  std::set<std::string> mesh_headings;

  friend bool operator==(const ArticleMetadata&,
                         const ArticleMetadata&) = default;
};

struct PubDate {
  std::optional<int> year;
  std::optional<int> month;
};

// Accepts "YYYY" or "YYYY Mon" (an optional trailing day is ignored).
// Years outside [1800, 2100] are rejected.
std::optional<PubDate> parse_pub_date(std::string_view field);

// "2014 Feb", "1999", or "" when the year is unknown.
std::string format_pub_date(std::optional<int> year, std::optional<int> month);

struct QuarantinedPredication {
  PredicationRecord record;
  std::string reason;

  friend bool operator==(const QuarantinedPredication&,
                         const QuarantinedPredication&) = default;
};

struct ClaimCorpus {
  std::vector<PredicationRecord> predications;
  std::map<std::string, SentenceRecord> sentences;
  std::map<std::string, ArticleMetadata> articles;
  std::vector<QuarantinedPredication> quarantine;

  const SentenceRecord& sentence_of(const PredicationRecord& p) const {
    return sentences.at(p.sentence_id);
  }
  const ArticleMetadata& article_of(const PredicationRecord& p) const {
    return articles.at(p.article_id);
  }

  friend bool operator==(const ClaimCorpus&, const ClaimCorpus&) = default;
};

struct FormatSpec {
  char field_delimiter = '\t';
  char list_delimiter = ',';
  bool strict = false;

  static FormatSpec predications() { return {'\t', ',', false}; }
  static FormatSpec sentences() { return {'\t', ',', false}; }
  static FormatSpec articles() { return {'\t', '|', false}; }
};

// Header problems and strict-mode row failures.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Diagnostic {
  std::size_t line = 0;
  std::string message;
};

template <typename Record>
struct ParseResult {
  std::vector<Record> records;
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;
};

inline constexpr std::string_view kPredicationsHeader =
    "PREDICATION_ID\tSENTENCE_ID\tPMID\tPREDICATE\tSUBJECT_CUI\tSUBJECT_NAME\t"
    "SUBJECT_SEMTYPES\tOBJECT_CUI\tOBJECT_NAME\tOBJECT_SEMTYPES";
inline constexpr std::string_view kSentencesHeader =
    "SENTENCE_ID\tPMID\tLOCATION\tORDINAL\tTEXT";
inline constexpr std::string_view kArticlesHeader =
    "PMID\tPUB_DATE\tPUB_TYPES\tMESH_HEADINGS";

ParseResult<PredicationRecord> parse_predications(
    std::istream& in, const FormatSpec& format = FormatSpec::predications());
ParseResult<SentenceRecord> parse_sentences(
    std::istream& in, const FormatSpec& format = FormatSpec::sentences());
ParseResult<ArticleMetadata> parse_metadata(
    std::istream& in, const FormatSpec& format = FormatSpec::articles());

class LinkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds the cross-referenced corpus. Predications whose sentence or article
// is missing, or whose sentence belongs to another article, are quarantined;
// with `strict` the first one throws LinkError. Duplicate sentence or article
// ids throw LinkError in both modes.
ClaimCorpus link(std::vector<PredicationRecord> predications,
                 std::vector<SentenceRecord> sentences,
                 std::vector<ArticleMetadata> metadata, bool strict = false);

// Writers for the input TSV layouts; re-parsing their output reproduces the
// records field by field.
void write_predications(std::ostream& out,
                        const std::vector<PredicationRecord>& records);
void write_sentences(std::ostream& out,
                     const std::vector<SentenceRecord>& records);
void write_metadata(std::ostream& out,
                    const std::vector<ArticleMetadata>& records);

}  // namespace knowcert
