// Knowledge units (one SPO triple aggregated over its source sentences) and
// computable knowledge objects (unit + id + uncertainty status and score).
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "knowcert/corpus.hpp"
#include "knowcert/cue_tagger.hpp"

namespace knowcert {

struct UnitKey {
  std::string subject_cui;
  Predicate predicate;
  std::string object_cui;

  friend bool operator==(const UnitKey&, const UnitKey&) = default;
  friend auto operator<=>(const UnitKey&, const UnitKey&) = default;
};

std::string to_string(const UnitKey& key);  // "C1-TREATS-C2"

// One supporting sentence of a unit.
struct Claim {
  std::string predication_id;
  std::string sentence_id;
  std::string article_id;
  SentenceLocation location = SentenceLocation::abstract;
  std::optional<int> pub_year;
  std::optional<int> pub_month;
  bool hedged = false;
  std::optional<std::string> disagreement_cue;
  std::string subject_name;
  std::string object_name;

  friend bool operator==(const Claim&, const Claim&) = default;
};

// Chronological order: (pub_year, pub_month, article_id, sentence_id), with
// undated claims last.
bool claim_before(const Claim& a, const Claim& b);

struct KnowledgeUnit {
  UnitKey key;
  std::vector<Claim> claims;

  friend bool operator==(const KnowledgeUnit&, const KnowledgeUnit&) = default;
};

using UnitMap = std::map<UnitKey, KnowledgeUnit>;

struct UnitBuild {
  UnitMap units;
  // Predications folded into an existing claim because the same sentence
  // yielded the same triple more than once.
  std::vector<std::string> collapsed;
};

// Groups predications by (subject CUI, predicate, object CUI). A claim is a
// distinct (sentence, triple); of duplicate predications the one with the
// smallest predication_id is kept. Claims take hedged/disagreement flags from
// `tags` (a sentence missing from `tags` carries no cues).
UnitBuild build_units(const ClaimCorpus& corpus, const CueMap& tags);

enum class ScoreMode { hedge, all };
std::string_view score_mode_name(ScoreMode mode);
std::optional<ScoreMode> parse_score_mode(std::string_view name);

inline bool is_uncertain(const Claim& c, ScoreMode mode) {
  return c.hedged || (mode == ScoreMode::all && c.disagreement_cue.has_value());
}

enum class UncertaintyStatus { Hedging, Diversity, ControversyContradiction };
std::string_view status_name(UncertaintyStatus s);

struct UncertaintyScore {
  std::uint64_t uncertain = 0;
  std::uint64_t total = 0;

  double value() const {
    return total == 0 ? 0.0 : static_cast<double>(uncertain) / static_cast<double>(total);
  }
  friend bool operator==(const UncertaintyScore&, const UncertaintyScore&) = default;
};

struct KnowledgeObject {
  std::string id;
  KnowledgeUnit unit;
  std::set<UncertaintyStatus> statuses;
  UncertaintyScore uncertainty_score;
};

// 64 hex chars of SHA-256 over (subject CUI, raw predicate, object CUI,
// corpus version).
std::string object_id(const UnitKey& key, std::string_view corpus_version);

KnowledgeObject make_object(const KnowledgeUnit& unit,
                            std::string_view corpus_version,
                            ScoreMode mode = ScoreMode::all);

enum class HedgeExclusion {
  drop_claims,          // remove hedged claims, then units left empty
  drop_units_if_empty,  // remove only units whose every claim is hedged
};

UnitMap exclude_hedged(const UnitMap& units,
                       HedgeExclusion mode = HedgeExclusion::drop_claims);

struct TimelineRow {
  std::optional<int> year;  // nullopt is the trailing "unknown" bucket
  std::size_t claim_count = 0;
  std::size_t uncertain_claim_count = 0;

  friend bool operator==(const TimelineRow&, const TimelineRow&) = default;
};

std::vector<TimelineRow> timeline(const KnowledgeUnit& unit,
                                  ScoreMode mode = ScoreMode::all);

// Everything the `units` stage persists: the full unit map plus the options
// later stages need to reproduce the working set and object ids.
struct UnitStore {
  std::string corpus_version;
  ScoreMode score_mode = ScoreMode::all;
  bool hedged_excluded = false;
  HedgeExclusion exclusion_mode = HedgeExclusion::drop_claims;
  UnitMap units;
  std::vector<std::string> collapsed;

  // The unit map detectors run on.
  UnitMap working_units() const {
    return hedged_excluded ? exclude_hedged(units, exclusion_mode) : units;
  }
  std::size_t hedged_claim_count() const;

  // id -> object, statuses limited to Hedging (detectors add the rest).
  std::map<std::string, KnowledgeObject> objects() const;
};

}  // namespace knowcert
