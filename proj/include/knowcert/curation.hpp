// Human biocuration over findings: an append-only decision log and the
// application of its decisions to detector output.
#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "knowcert/detectors.hpp"
#include "knowcert/findings_io.hpp"

namespace knowcert {

// ner_error: a concept was mis-recognized. sre_error: the predicate does not
// reflect the sentence. out_of_scope: the finding is outside the study focus.
enum class Verdict { valid, ner_error, sre_error, out_of_scope };
std::string_view verdict_name(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view name);

using Timestamp = std::chrono::sys_seconds;

std::string format_timestamp(Timestamp t);  // "2020-06-01T08:30:00Z"
std::optional<Timestamp> parse_timestamp(std::string_view s);

struct CurationDecision {
  std::string decision_id;
  std::string finding_id;
  std::string content_hash;  // hash of the finding the curator looked at
  Verdict verdict = Verdict::valid;
  std::vector<std::string> affected_claims;  // predication ids
  std::optional<std::string> category_label;
  std::string curator;
  Timestamp timestamp{};
  std::optional<std::string> note;

  // An error verdict without affected claims, or out_of_scope.
  bool invalidates_whole_finding() const {
    return verdict == Verdict::out_of_scope ||
           (verdict != Verdict::valid && affected_claims.empty());
  }
  friend bool operator==(const CurationDecision&, const CurationDecision&) = default;
};

Json decision_to_json(const CurationDecision& d);
CurationDecision decision_from_json(const Json& j);

class CurationError : public std::runtime_error {
 public:
  enum class Kind { malformed, unknown_finding, conflict };
  CurationError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct ReplayResult {
  std::vector<CurationDecision> decisions;
  std::vector<std::string> warnings;
  std::size_t valid_bytes = 0;  // end of the last good record
};

// Newline-delimited JSON decisions. Appends are fsync'ed; complete records
// are never touched. Opening the log cuts off the torn tail of an interrupted
// append, so later records cannot land behind it.
class DecisionLog {
 public:
  explicit DecisionLog(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }
  const std::vector<CurationDecision>& decisions() const { return decisions_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Assigns decision_id when empty, then appends.
  const CurationDecision& append(CurationDecision d);

  // A missing file replays as empty. A trailing line without its newline
  // (interrupted append) is ignored with a warning; any other malformed line
  // throws CurationError.
  static ReplayResult replay(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  std::vector<CurationDecision> decisions_;
  std::vector<std::string> warnings_;
};

// Lookup of the findings decisions may refer to.
class FindingIndex {
 public:
  explicit FindingIndex(const FindingSet& findings);

  bool contains(std::string_view id) const { return hashes_.contains(std::string(id)); }
  const std::string& content_hash(std::string_view id) const;
  // Predication ids of the finding's evidence claims.
  const std::vector<std::string>& claim_ids(std::string_view id) const;

 private:
  std::map<std::string, std::string> hashes_;
  std::map<std::string, std::vector<std::string>> claims_;
};

// Throws CurationError: unknown finding, empty curator, affected claims that
// are not evidence of the finding (malformed), or a content hash that does
// not match the finding (conflict).
void validate_decision(const CurationDecision& d, const FindingIndex& index);

const CurationDecision& record_decision(DecisionLog& log, CurationDecision d,
                                        const FindingIndex& index);

// Latest decision per finding: by timestamp, ties broken by log order.
std::map<std::string, const CurationDecision*> effective_decisions(
    const std::vector<CurationDecision>& decisions);

struct CurationResult {
  FindingSet curated;   // surviving findings with their states
  FindingSet rejected;  // removed findings, state rejected
  std::vector<std::string> warnings;
};

// Applies the log to detector output. `units` is the working unit map the
// findings were detected on; partial invalidations remove the affected claims
// from the pair and re-run contradiction/diversity detection on it. Decisions
// for unknown findings or with a stale content hash are skipped with a
// warning.
CurationResult apply_decisions(const FindingSet& findings, const UnitMap& units,
                               const std::vector<CurationDecision>& decisions,
                               const PolarityTable& polarity,
                               const DetectorOptions& options = {});

}  // namespace knowcert
