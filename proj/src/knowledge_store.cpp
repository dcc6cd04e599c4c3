#include "knowcert/knowledge_store.hpp"

#include <algorithm>
#include <tuple>

#include "knowcert/hashing.hpp"

namespace knowcert {

namespace {

// nullopt sorts after every value.
template <typename T>
auto late_if_absent(const std::optional<T>& v) {
  return std::make_tuple(!v.has_value(), v.value_or(T{}));
}

}  // namespace

std::string to_string(const UnitKey& key) {
  return key.subject_cui + "-" + key.predicate.raw() + "-" + key.object_cui;
}

bool claim_before(const Claim& a, const Claim& b) {
  return std::forward_as_tuple(late_if_absent(a.pub_year),
                               late_if_absent(a.pub_month), a.article_id,
                               a.sentence_id) <
         std::forward_as_tuple(late_if_absent(b.pub_year),
                               late_if_absent(b.pub_month), b.article_id,
                               b.sentence_id);
}

UnitBuild build_units(const ClaimCorpus& corpus, const CueMap& tags) {
  UnitBuild out;
  for (const auto& p : corpus.predications) {
    UnitKey key{p.subject.cui, p.predicate, p.object.cui};
    auto it = out.units.find(key);
    if (it == out.units.end()) {
      it = out.units.emplace_hint(it, key, KnowledgeUnit{key, {}});
    }
    const auto& sentence = corpus.sentence_of(p);
    const auto& article = corpus.article_of(p);
    Claim c;
    c.predication_id = p.predication_id;
    c.sentence_id = p.sentence_id;
    c.article_id = p.article_id;
    c.location = sentence.location;
    c.pub_year = article.pub_year;
    c.pub_month = article.pub_month;
    if (auto t = tags.find(p.sentence_id); t != tags.end()) {
      c.hedged = t->second.hedged();
      if (!t->second.disagreement_hits.empty()) {
        c.disagreement_cue = t->second.disagreement_hits.front().term;
      }
    }
    c.subject_name = p.subject.preferred_name;
    c.object_name = p.object.preferred_name;
    it->second.claims.push_back(std::move(c));
  }

  for (auto& [key, unit] : out.units) {
    auto& claims = unit.claims;
    std::sort(claims.begin(), claims.end(), [](const Claim& a, const Claim& b) {
      return std::tie(a.sentence_id, a.predication_id) <
             std::tie(b.sentence_id, b.predication_id);
    });
    size_t kept = 0;
    for (size_t i = 0; i < claims.size(); ++i) {
      if (kept > 0 && claims[kept - 1].sentence_id == claims[i].sentence_id) {
        out.collapsed.push_back(claims[i].predication_id);
        continue;
      }
      if (kept != i) claims[kept] = std::move(claims[i]);
      ++kept;
    }
    claims.resize(kept);
    std::sort(claims.begin(), claims.end(), claim_before);
  }
  std::sort(out.collapsed.begin(), out.collapsed.end());
  return out;
}

std::string_view score_mode_name(ScoreMode mode) {
  return mode == ScoreMode::hedge ? "hedge" : "all";
}

std::optional<ScoreMode> parse_score_mode(std::string_view name) {
  if (name == "hedge") return ScoreMode::hedge;
  if (name == "all") return ScoreMode::all;
  return std::nullopt;
}

std::string_view status_name(UncertaintyStatus s) {
  switch (s) {
    case UncertaintyStatus::Hedging: return "Hedging";
    case UncertaintyStatus::Diversity: return "Diversity";
    case UncertaintyStatus::ControversyContradiction:
      return "ControversyContradiction";
  }
  return "";
}

std::string object_id(const UnitKey& key, std::string_view corpus_version) {
  return sha256_fields(
      {key.subject_cui, key.predicate.raw(), key.object_cui, corpus_version});
}

KnowledgeObject make_object(const KnowledgeUnit& unit,
                            std::string_view corpus_version, ScoreMode mode) {
  KnowledgeObject obj;
  obj.id = object_id(unit.key, corpus_version);
  obj.unit = unit;
  obj.uncertainty_score.total = unit.claims.size();
  bool any_hedged = false;
  for (const auto& c : unit.claims) {
    any_hedged = any_hedged || c.hedged;
    if (is_uncertain(c, mode)) ++obj.uncertainty_score.uncertain;
  }
  if (any_hedged) obj.statuses.insert(UncertaintyStatus::Hedging);
  return obj;
}

UnitMap exclude_hedged(const UnitMap& units, HedgeExclusion mode) {
  UnitMap out;
  for (const auto& [key, unit] : units) {
    if (mode == HedgeExclusion::drop_units_if_empty) {
      bool all_hedged = std::all_of(unit.claims.begin(), unit.claims.end(),
                                    [](const Claim& c) { return c.hedged; });
      if (!all_hedged) out.emplace_hint(out.end(), key, unit);
      continue;
    }
    KnowledgeUnit kept{key, {}};
    for (const auto& c : unit.claims) {
      if (!c.hedged) kept.claims.push_back(c);
    }
    if (!kept.claims.empty()) out.emplace_hint(out.end(), key, std::move(kept));
  }
  return out;
}

std::vector<TimelineRow> timeline(const KnowledgeUnit& unit, ScoreMode mode) {
  std::map<int, TimelineRow> by_year;
  TimelineRow unknown;
  for (const auto& c : unit.claims) {
    TimelineRow& row = c.pub_year ? by_year[*c.pub_year] : unknown;
    row.year = c.pub_year;
    ++row.claim_count;
    if (is_uncertain(c, mode)) ++row.uncertain_claim_count;
  }
  std::vector<TimelineRow> rows;
  for (auto& [year, row] : by_year) rows.push_back(row);
  if (unknown.claim_count > 0) rows.push_back(unknown);
  return rows;
}

std::size_t UnitStore::hedged_claim_count() const {
  std::size_t n = 0;
  for (const auto& [key, unit] : units) {
    for (const auto& c : unit.claims) n += c.hedged ? 1 : 0;
  }
  return n;
}

std::map<std::string, KnowledgeObject> UnitStore::objects() const {
  std::map<std::string, KnowledgeObject> out;
  for (const auto& [key, unit] : units) {
    auto obj = make_object(unit, corpus_version, score_mode);
    std::string id = obj.id;
    out.emplace(std::move(id), std::move(obj));
  }
  return out;
}

}  // namespace knowcert
