#include "knowcert/findings_io.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace knowcert {

namespace {

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

Json pair_to_json(const PairKey& pair, const DisplayNames& names) {
  Json j;
  j["subject_cui"] = pair.subject_cui;
  j["subject_name"] = names.subject;
  j["object_cui"] = pair.object_cui;
  j["object_name"] = names.object;
  return j;
}

PairKey pair_from_json(const Json& j) {
  return {j.at("subject_cui").get<std::string>(),
          j.at("object_cui").get<std::string>()};
}

Json side_to_json(const std::vector<PredicateSupport>& side) {
  Json arr = Json::array();
  for (const auto& s : side) {
    Json entry;
    entry["predicate"] = s.predicate.raw();
    entry["claim_count"] = s.claim_count();
    Json claims = Json::array();
    for (const auto& c : s.claims) claims.push_back(claim_to_json(c));
    entry["claims"] = std::move(claims);
    arr.push_back(std::move(entry));
  }
  return arr;
}

std::vector<PredicateSupport> side_from_json(const Json& arr) {
  std::vector<PredicateSupport> side;
  for (const auto& entry : arr) {
    PredicateSupport s;
    s.predicate = Predicate::parse(entry.at("predicate").get<std::string>());
    for (const auto& c : entry.at("claims")) s.claims.push_back(claim_from_json(c));
    if (entry.contains("claim_count") &&
        entry.at("claim_count").get<std::size_t>() != s.claims.size()) {
      throw FindingsFormatError(fmt::format(
          "claim_count of {} disagrees with its claim list", s.predicate.raw()));
    }
    side.push_back(std::move(s));
  }
  return side;
}

void collect(const std::vector<PredicateSupport>& side,
             std::vector<const Claim*>& out) {
  for (const auto& s : side) {
    for (const auto& c : s.claims) out.push_back(&c);
  }
}

std::string most_common(const std::map<std::string, size_t>& counts) {
  std::string best;
  size_t best_count = 0;
  for (const auto& [name, n] : counts) {
    if (n > best_count) {
      best = name;
      best_count = n;
    }
  }
  return best;
}

Json header(FindingType type, const std::string& id, const std::string& hash) {
  Json j;
  j["schema"] = kFindingSchema;
  j["type"] = finding_type_name(type);
  j["id"] = id;
  j["content_hash"] = hash;
  return j;
}

}  // namespace

DisplayNames display_names(const std::vector<const Claim*>& claims) {
  std::map<std::string, size_t> subjects;
  std::map<std::string, size_t> objects;
  for (const Claim* c : claims) {
    ++subjects[c->subject_name];
    ++objects[c->object_name];
  }
  return {most_common(subjects), most_common(objects)};
}

DisplayNames display_names(const ContradictionFinding& f) {
  std::vector<const Claim*> claims;
  collect(f.excitatory, claims);
  collect(f.inhibitory, claims);
  return display_names(claims);
}

DisplayNames display_names(const DiversityFinding& f) {
  std::vector<const Claim*> claims;
  collect(f.labels, claims);
  return display_names(claims);
}

Json claim_to_json(const Claim& c) {
  Json j;
  j["predication_id"] = c.predication_id;
  j["sentence_id"] = c.sentence_id;
  j["article_id"] = c.article_id;
  j["location"] = location_code(c.location);
  j["pub_year"] = optional_json(c.pub_year);
  j["pub_month"] = optional_json(c.pub_month);
  j["hedged"] = c.hedged;
  j["disagreement_cue"] = optional_json(c.disagreement_cue);
  j["subject_name"] = c.subject_name;
  j["object_name"] = c.object_name;
  return j;
}

Claim claim_from_json(const Json& j) {
  Claim c;
  c.predication_id = j.at("predication_id").get<std::string>();
  c.sentence_id = j.at("sentence_id").get<std::string>();
  c.article_id = j.at("article_id").get<std::string>();
  auto loc = parse_location(j.at("location").get<std::string>());
  if (!loc) throw FindingsFormatError("bad claim location");
  c.location = *loc;
  c.pub_year = optional_from<int>(j, "pub_year");
  c.pub_month = optional_from<int>(j, "pub_month");
  c.hedged = j.at("hedged").get<bool>();
  c.disagreement_cue = optional_from<std::string>(j, "disagreement_cue");
  c.subject_name = j.value("subject_name", "");
  c.object_name = j.value("object_name", "");
  return c;
}

Json unit_key_to_json(const UnitKey& key) {
  Json j;
  j["subject_cui"] = key.subject_cui;
  j["predicate"] = key.predicate.raw();
  j["object_cui"] = key.object_cui;
  return j;
}

UnitKey unit_key_from_json(const Json& j) {
  return {j.at("subject_cui").get<std::string>(),
          Predicate::parse(j.at("predicate").get<std::string>()),
          j.at("object_cui").get<std::string>()};
}

Json status_to_json(const CurationStatus& s) {
  Json j;
  j["state"] = state_name(s.state);
  j["applied_decisions"] = s.applied_decisions;
  j["category_label"] = optional_json(s.category_label);
  return j;
}

CurationStatus status_from_json(const Json& j) {
  CurationStatus s;
  auto state = parse_state(j.at("state").get<std::string>());
  if (!state) throw FindingsFormatError("bad curation state");
  s.state = *state;
  s.applied_decisions = j.value("applied_decisions", std::vector<std::string>{});
  s.category_label = optional_from<std::string>(j, "category_label");
  return s;
}

Json finding_to_json(const ContradictionFinding& f) {
  Json j = header(FindingType::contradiction, f.id, f.content_hash);
  j["pair"] = pair_to_json(f.pair, display_names(f));
  j["excitatory"] = side_to_json(f.excitatory);
  j["inhibitory"] = side_to_json(f.inhibitory);
  j["status"] = status_to_json(f.status);
  return j;
}

Json finding_to_json(const DiversityFinding& f) {
  Json j = header(FindingType::diversity, f.id, f.content_hash);
  j["pair"] = pair_to_json(f.pair, display_names(f));
  j["group"] = polarity_name(f.group);
  j["labels"] = side_to_json(f.labels);
  j["status"] = status_to_json(f.status);
  return j;
}

Json finding_to_json(const ApparentFinding& f) {
  Json j = header(FindingType::apparent, f.id, f.content_hash);
  j["unit"] = unit_key_to_json(f.unit_key);
  j["cue"] = f.cue;
  j["claim"] = claim_to_json(f.claim);
  j["status"] = status_to_json(f.status);
  return j;
}

void finding_from_json(const Json& j, FindingSet& set) {
  if (j.value("schema", "") != kFindingSchema) {
    throw FindingsFormatError(
        fmt::format("unsupported finding schema '{}'", j.value("schema", "")));
  }
  auto type = parse_finding_type(j.at("type").get<std::string>());
  if (!type) throw FindingsFormatError("unknown finding type");
  auto id = j.at("id").get<std::string>();
  auto hash = j.at("content_hash").get<std::string>();
  auto status = status_from_json(j.at("status"));
  switch (*type) {
    case FindingType::contradiction: {
      ContradictionFinding f{id, hash, pair_from_json(j.at("pair")),
                             side_from_json(j.at("excitatory")),
                             side_from_json(j.at("inhibitory")), status};
      set.contradictions.push_back(std::move(f));
      break;
    }
    case FindingType::diversity: {
      DiversityFinding f;
      f.id = id;
      f.content_hash = hash;
      f.pair = pair_from_json(j.at("pair"));
      auto group = j.at("group").get<std::string>();
      if (group == "Excitatory") {
        f.group = Polarity::Excitatory;
      } else if (group == "Inhibitory") {
        f.group = Polarity::Inhibitory;
      } else {
        throw FindingsFormatError("diversity group must be Excitatory or Inhibitory");
      }
      f.labels = side_from_json(j.at("labels"));
      f.status = status;
      set.diversity.push_back(std::move(f));
      break;
    }
    case FindingType::apparent: {
      ApparentFinding f{id, hash, claim_from_json(j.at("claim")),
                        unit_key_from_json(j.at("unit")),
                        j.at("cue").get<std::string>(), status};
      set.apparent.push_back(std::move(f));
      break;
    }
  }
}

void write_findings_jsonl(std::ostream& out, const FindingSet& findings) {
  for (const auto& f : findings.contradictions) out << finding_to_json(f).dump() << '\n';
  for (const auto& f : findings.diversity) out << finding_to_json(f).dump() << '\n';
  for (const auto& f : findings.apparent) out << finding_to_json(f).dump() << '\n';
}

std::string findings_jsonl(const FindingSet& findings) {
  std::ostringstream out;
  write_findings_jsonl(out, findings);
  return out.str();
}

FindingSet read_findings_jsonl(std::istream& in) {
  FindingSet set;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      finding_from_json(Json::parse(line), set);
    } catch (const FindingsFormatError& e) {
      throw FindingsFormatError(fmt::format("line {}: {}", line_no, e.what()));
    } catch (const std::exception& e) {
      throw FindingsFormatError(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return set;
}

Json object_to_json(const KnowledgeObject& obj, const std::vector<TimelineRow>& rows) {
  Json j;
  j["id"] = obj.id;
  j["unit"] = unit_key_to_json(obj.unit.key);
  Json statuses = Json::array();
  for (auto s : obj.statuses) statuses.push_back(status_name(s));
  j["statuses"] = std::move(statuses);
  Json score;
  score["uncertain"] = obj.uncertainty_score.uncertain;
  score["total"] = obj.uncertainty_score.total;
  score["value"] = obj.uncertainty_score.value();
  j["uncertainty_score"] = std::move(score);
  Json claims = Json::array();
  for (const auto& c : obj.unit.claims) claims.push_back(claim_to_json(c));
  j["claims"] = std::move(claims);
  Json tl = Json::array();
  for (const auto& r : rows) {
    Json row;
    row["year"] = optional_json(r.year);
    row["claim_count"] = r.claim_count;
    row["uncertain_claim_count"] = r.uncertain_claim_count;
    tl.push_back(std::move(row));
  }
  j["timeline"] = std::move(tl);
  return j;
}

}  // namespace knowcert
