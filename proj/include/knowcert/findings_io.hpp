// JSON encoding of claims, findings and knowledge objects, and the
// findings.jsonl artifact (one finding per line, stable field order).
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "knowcert/detectors.hpp"
#include "knowcert/knowledge_store.hpp"

namespace knowcert {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kFindingSchema = "knowcert.finding/1";

class FindingsFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DisplayNames {
  std::string subject;
  std::string object;
};

// Most frequent spelling among the claims (ties: lexicographically smallest).
DisplayNames display_names(const std::vector<const Claim*>& claims);
DisplayNames display_names(const ContradictionFinding& f);
DisplayNames display_names(const DiversityFinding& f);

Json claim_to_json(const Claim& c);
Claim claim_from_json(const Json& j);

Json unit_key_to_json(const UnitKey& key);
UnitKey unit_key_from_json(const Json& j);

Json status_to_json(const CurationStatus& s);
CurationStatus status_from_json(const Json& j);

Json finding_to_json(const ContradictionFinding& f);
Json finding_to_json(const DiversityFinding& f);
Json finding_to_json(const ApparentFinding& f);

// Dispatches on "type"; the result is added to `set`.
void finding_from_json(const Json& j, FindingSet& set);

// Contradictions, then diversity, then apparent findings, each in detector
// order.
void write_findings_jsonl(std::ostream& out, const FindingSet& findings);
std::string findings_jsonl(const FindingSet& findings);
FindingSet read_findings_jsonl(std::istream& in);

Json object_to_json(const KnowledgeObject& obj, const std::vector<TimelineRow>& rows);

}  // namespace knowcert
