// Cross-sentence contradiction and diversity detection over concept pairs,
// and within-sentence apparent disagreement detection.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knowcert/cue_tagger.hpp"
#include "knowcert/knowledge_store.hpp"
#include "knowcert/polarity.hpp"

namespace knowcert {

// Directed (subject, object) pair; (S, O) and (O, S) are different pairs.
struct PairKey {
  std::string subject_cui;
  std::string object_cui;

  friend bool operator==(const PairKey&, const PairKey&) = default;
  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

enum class CurationState { pending, accepted, rejected, reclassified };
std::string_view state_name(CurationState s);
std::optional<CurationState> parse_state(std::string_view name);

struct CurationStatus {
  CurationState state = CurationState::pending;
  std::vector<std::string> applied_decisions;
  std::optional<std::string> category_label;

  friend bool operator==(const CurationStatus&, const CurationStatus&) = default;
};

// One predicate of a pair together with the claims supporting it.
struct PredicateSupport {
  Predicate predicate;
  std::vector<Claim> claims;

  std::size_t claim_count() const { return claims.size(); }
  friend bool operator==(const PredicateSupport&, const PredicateSupport&) = default;
};

enum class FindingType { contradiction, diversity, apparent };
std::string_view finding_type_name(FindingType t);
std::optional<FindingType> parse_finding_type(std::string_view name);

struct ContradictionFinding {
  std::string id;
  std::string content_hash;
  PairKey pair;
  std::vector<PredicateSupport> excitatory;  // sorted by predicate
  std::vector<PredicateSupport> inhibitory;
  CurationStatus status;

  friend bool operator==(const ContradictionFinding&,
                         const ContradictionFinding&) = default;
};

struct DiversityFinding {
  std::string id;
  std::string content_hash;
  PairKey pair;
  Polarity group = Polarity::Neutral;
  std::vector<PredicateSupport> labels;  // >= 2, one polarity, sorted
  CurationStatus status;

  friend bool operator==(const DiversityFinding&, const DiversityFinding&) = default;
};

struct ApparentFinding {
  std::string id;
  std::string content_hash;
  Claim claim;
  UnitKey unit_key;
  std::string cue;
  CurationStatus status;

  friend bool operator==(const ApparentFinding&, const ApparentFinding&) = default;
};

struct FindingSet {
  std::vector<ContradictionFinding> contradictions;
  std::vector<DiversityFinding> diversity;
  std::vector<ApparentFinding> apparent;

  std::size_t size() const {
    return contradictions.size() + diversity.size() + apparent.size();
  }
  friend bool operator==(const FindingSet&, const FindingSet&) = default;
};

struct DetectorOptions {
  // A predicate needs at least this many eligible claims to take part.
  std::size_t min_claims = 1;
  // Only abstract sentences count as evidence.
  bool abstract_only = true;
  // Claims whose sentence carries a disagreement cue are left out of the
  // cross-sentence detectors (apparent detection still sees them).
  bool drop_cue_claims = false;
};

// Contradiction and diversity findings for one pair share this id, so a
// finding keeps its id when curation reclassifies it.
std::string pair_finding_id(const PairKey& pair);
std::string apparent_finding_id(const UnitKey& key, std::string_view sentence_id,
                                std::string_view cue);

// One finding per pair with at least one Excitatory and one Inhibitory
// predicate; Neutral predicates are ignored. Sorted by pair.
std::vector<ContradictionFinding> detect_contradictions(
    const UnitMap& units, const PolarityTable& table,
    const DetectorOptions& options = {});

// One finding per pair with >= 2 polarized predicates, all in one group.
// Pairs with any cross-group predicate are contradictions instead.
std::vector<DiversityFinding> detect_diversity(const UnitMap& units,
                                               const PolarityTable& table,
                                               const DetectorOptions& options = {});

// One finding per (claim, unit, distinct disagreement cue of the sentence).
std::vector<ApparentFinding> detect_apparent(const UnitMap& units,
                                             const CueMap& tags,
                                             const DetectorOptions& options = {});

FindingSet detect_all(const UnitMap& units, const PolarityTable& table,
                      const CueMap& tags, const DetectorOptions& options = {});

// Adds ControversyContradiction (contradiction or apparent findings) and
// Diversity to the objects whose unit takes part in a finding; rejected
// findings confer nothing. Objects are keyed by object id.
std::map<std::string, KnowledgeObject> mark_statuses(
    std::map<std::string, KnowledgeObject> objects, const FindingSet& findings);

// Canonical evidence digests; recomputed by detectors, stored on findings.
std::string content_hash(const ContradictionFinding& f);
std::string content_hash(const DiversityFinding& f);
std::string content_hash(const ApparentFinding& f);

}  // namespace knowcert
