#include "knowcert/detectors.hpp"

#include <algorithm>
#include <set>

#include "knowcert/hashing.hpp"

namespace knowcert {

namespace {

struct PairEvidence {
  std::vector<PredicateSupport> excitatory;
  std::vector<PredicateSupport> inhibitory;
};

bool eligible(const Claim& c, const DetectorOptions& options) {
  if (options.abstract_only && c.location != SentenceLocation::abstract) {
    return false;
  }
  if (options.drop_cue_claims && c.disagreement_cue) return false;
  return true;
}

// A supported, polarized unit of a pair; claims are copied only for pairs
// that end up in a finding.
struct UnitRef {
  const KnowledgeUnit* unit;
  Polarity polarity;
};

using PairView = std::pair<std::string_view, std::string_view>;

std::map<PairView, std::vector<UnitRef>> group_by_pair(const UnitMap& units,
                                                       const PolarityTable& table,
                                                       const DetectorOptions& options) {
  std::map<PairView, std::vector<UnitRef>> pairs;
  for (const auto& [key, unit] : units) {
    auto pol = table.polarity(key.predicate);
    if (pol == Polarity::Neutral) continue;
    std::size_t n = 0;
    for (const auto& c : unit.claims) n += eligible(c, options);
    if (n == 0 || n < options.min_claims) continue;
    pairs[{key.subject_cui, key.object_cui}].push_back({&unit, pol});
  }
  return pairs;
}

// Units arrive in (subject, predicate, object) order, so each side is sorted
// by predicate.
PairEvidence materialize(const std::vector<UnitRef>& refs, const DetectorOptions& options) {
  PairEvidence ev;
  for (const auto& r : refs) {
    PredicateSupport support{r.unit->key.predicate, {}};
    for (const auto& c : r.unit->claims) {
      if (eligible(c, options)) support.claims.push_back(c);
    }
    (r.polarity == Polarity::Excitatory ? ev.excitatory : ev.inhibitory)
        .push_back(std::move(support));
  }
  return ev;
}

std::size_t count(const std::vector<UnitRef>& refs, Polarity p) {
  return std::count_if(refs.begin(), refs.end(),
                       [p](const UnitRef& r) { return r.polarity == p; });
}

void append_side(std::string& out, std::string_view tag,
                 const std::vector<PredicateSupport>& side) {
  out += tag;
  for (const auto& s : side) {
    out += '\x1e';
    out += s.predicate.raw();
    for (const auto& c : s.claims) {
      out += '\x1f';
      out += c.predication_id;
      out += '/';
      out += c.sentence_id;
    }
  }
  out += '\x1d';
}

}  // namespace

std::string_view state_name(CurationState s) {
  switch (s) {
    case CurationState::pending: return "pending";
    case CurationState::accepted: return "accepted";
    case CurationState::rejected: return "rejected";
    case CurationState::reclassified: return "reclassified";
  }
  return "pending";
}

std::optional<CurationState> parse_state(std::string_view name) {
  for (auto s : {CurationState::pending, CurationState::accepted,
                 CurationState::rejected, CurationState::reclassified}) {
    if (state_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view finding_type_name(FindingType t) {
  switch (t) {
    case FindingType::contradiction: return "contradiction";
    case FindingType::diversity: return "diversity";
    case FindingType::apparent: return "apparent";
  }
  return "";
}

std::optional<FindingType> parse_finding_type(std::string_view name) {
  for (auto t : {FindingType::contradiction, FindingType::diversity,
                 FindingType::apparent}) {
    if (finding_type_name(t) == name) return t;
  }
  return std::nullopt;
}

std::string pair_finding_id(const PairKey& pair) {
  return "F" + sha256_fields({"pair", pair.subject_cui, pair.object_cui}).substr(0, 16);
}

std::string apparent_finding_id(const UnitKey& key, std::string_view sentence_id,
                                std::string_view cue) {
  return "A" + sha256_fields({"apparent", key.subject_cui, key.predicate.raw(),
                              key.object_cui, sentence_id, cue})
                   .substr(0, 16);
}

std::string content_hash(const ContradictionFinding& f) {
  std::string canon = "contradiction\x1d" + f.pair.subject_cui + '\x1f' +
                      f.pair.object_cui + '\x1d';
  append_side(canon, "E", f.excitatory);
  append_side(canon, "I", f.inhibitory);
  return sha256_hex(canon);
}

std::string content_hash(const DiversityFinding& f) {
  std::string canon = "diversity\x1d" + f.pair.subject_cui + '\x1f' +
                      f.pair.object_cui + '\x1d';
  append_side(canon, polarity_name(f.group), f.labels);
  return sha256_hex(canon);
}

std::string content_hash(const ApparentFinding& f) {
  return sha256_fields({"apparent", to_string(f.unit_key), f.claim.predication_id,
                        f.claim.sentence_id, f.cue});
}

std::vector<ContradictionFinding> detect_contradictions(
    const UnitMap& units, const PolarityTable& table,
    const DetectorOptions& options) {
  std::vector<ContradictionFinding> out;
  for (const auto& [view, refs] : group_by_pair(units, table, options)) {
    if (count(refs, Polarity::Excitatory) == 0 || count(refs, Polarity::Inhibitory) == 0) {
      continue;
    }
    auto ev = materialize(refs, options);
    ContradictionFinding f;
    f.pair = PairKey{std::string(view.first), std::string(view.second)};
    f.id = pair_finding_id(f.pair);
    f.excitatory = std::move(ev.excitatory);
    f.inhibitory = std::move(ev.inhibitory);
    f.content_hash = content_hash(f);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<DiversityFinding> detect_diversity(const UnitMap& units,
                                               const PolarityTable& table,
                                               const DetectorOptions& options) {
  std::vector<DiversityFinding> out;
  for (const auto& [view, refs] : group_by_pair(units, table, options)) {
    auto e = count(refs, Polarity::Excitatory), i = count(refs, Polarity::Inhibitory);
    if ((e > 0 && i > 0) || std::max(e, i) < 2) continue;
    auto ev = materialize(refs, options);
    DiversityFinding f;
    f.pair = PairKey{std::string(view.first), std::string(view.second)};
    f.id = pair_finding_id(f.pair);
    f.group = e > 0 ? Polarity::Excitatory : Polarity::Inhibitory;
    f.labels = std::move(e > 0 ? ev.excitatory : ev.inhibitory);
    f.content_hash = content_hash(f);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<ApparentFinding> detect_apparent(const UnitMap& units,
                                             const CueMap& tags,
                                             const DetectorOptions& options) {
  std::vector<ApparentFinding> out;
  for (const auto& [key, unit] : units) {
    for (const auto& c : unit.claims) {
      if (options.abstract_only && c.location != SentenceLocation::abstract) {
        continue;
      }
      auto t = tags.find(c.sentence_id);
      if (t == tags.end()) continue;
      std::set<std::string> cues;
      for (const auto& hit : t->second.disagreement_hits) cues.insert(hit.term);
      for (const auto& cue : cues) {
        ApparentFinding f;
        f.id = apparent_finding_id(key, c.sentence_id, cue);
        f.claim = c;
        f.unit_key = key;
        f.cue = cue;
        f.content_hash = content_hash(f);
        out.push_back(std::move(f));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const ApparentFinding& a, const ApparentFinding& b) {
    return std::tie(a.unit_key, a.claim.sentence_id, a.cue) <
           std::tie(b.unit_key, b.claim.sentence_id, b.cue);
  });
  return out;
}

FindingSet detect_all(const UnitMap& units, const PolarityTable& table,
                      const CueMap& tags, const DetectorOptions& options) {
  FindingSet set;
  set.contradictions = detect_contradictions(units, table, options);
  set.diversity = detect_diversity(units, table, options);
  set.apparent = detect_apparent(units, tags, options);
  return set;
}

std::map<std::string, KnowledgeObject> mark_statuses(
    std::map<std::string, KnowledgeObject> objects, const FindingSet& findings) {
  std::map<UnitKey, KnowledgeObject*> by_key;
  for (auto& [id, obj] : objects) by_key.emplace(obj.unit.key, &obj);

  auto mark = [&](const UnitKey& key, UncertaintyStatus status) {
    if (auto it = by_key.find(key); it != by_key.end()) {
      it->second->statuses.insert(status);
    }
  };
  auto mark_side = [&](const PairKey& pair,
                       const std::vector<PredicateSupport>& side,
                       UncertaintyStatus status) {
    for (const auto& s : side) {
      mark(UnitKey{pair.subject_cui, s.predicate, pair.object_cui}, status);
    }
  };
  auto live = [](const CurationStatus& s) { return s.state != CurationState::rejected; };
  for (const auto& f : findings.contradictions) {
    if (!live(f.status)) continue;
    mark_side(f.pair, f.excitatory, UncertaintyStatus::ControversyContradiction);
    mark_side(f.pair, f.inhibitory, UncertaintyStatus::ControversyContradiction);
  }
  for (const auto& f : findings.diversity) {
    if (!live(f.status)) continue;
    mark_side(f.pair, f.labels, UncertaintyStatus::Diversity);
  }
  for (const auto& f : findings.apparent) {
    if (!live(f.status)) continue;
    mark(f.unit_key, UncertaintyStatus::ControversyContradiction);
  }
  return objects;
}

}  // namespace knowcert
