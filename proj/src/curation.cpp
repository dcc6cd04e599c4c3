#include "knowcert/curation.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "knowcert/text.hpp"

namespace knowcert {

namespace {

using Kind = CurationError::Kind;

[[noreturn]] void malformed(const std::string& msg) {
  throw CurationError(Kind::malformed, msg);
}

std::optional<int> digits(std::string_view s, size_t pos, size_t n) {
  if (pos + n > s.size()) return std::nullopt;
  int v = 0;
  for (size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

void write_all(int fd, const std::string& data, const std::filesystem::path& path) {
  size_t done = 0;
  while (done < data.size()) {
    ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error(
          fmt::format("cannot write {}: {}", path.string(), std::strerror(errno)));
    }
    done += static_cast<size_t>(n);
  }
}

// Evidence claims of a pair finding, minus the removed ones, re-assembled as
// a unit map for the detectors.
UnitMap pair_units_without(const std::vector<const KnowledgeUnit*>& pair_units,
                           const std::set<std::string>& removed) {
  UnitMap out;
  for (const KnowledgeUnit* u : pair_units) {
    KnowledgeUnit copy{u->key, {}};
    for (const auto& c : u->claims) {
      if (!removed.contains(c.predication_id)) copy.claims.push_back(c);
    }
    if (!copy.claims.empty()) out.emplace(copy.key, std::move(copy));
  }
  return out;
}

void collect_ids(const std::vector<PredicateSupport>& side, std::vector<std::string>& out) {
  for (const auto& s : side) {
    for (const auto& c : s.claims) out.push_back(c.predication_id);
  }
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::valid: return "valid";
    case Verdict::ner_error: return "ner_error";
    case Verdict::sre_error: return "sre_error";
    case Verdict::out_of_scope: return "out_of_scope";
  }
  return "valid";
}

std::optional<Verdict> parse_verdict(std::string_view name) {
  for (auto v : {Verdict::valid, Verdict::ner_error, Verdict::sre_error,
                 Verdict::out_of_scope}) {
    if (verdict_name(v) == name) return v;
  }
  return std::nullopt;
}

std::string format_timestamp(Timestamp t) {
  auto day = std::chrono::floor<std::chrono::days>(t);
  std::chrono::year_month_day ymd{day};
  std::chrono::hh_mm_ss hms{t - day};
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z",
                     static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()), hms.hours().count(),
                     hms.minutes().count(), hms.seconds().count());
}

// Accepts "YYYY-MM-DDTHH:MM:SS" followed by optional fractional seconds
// (dropped) and a mandatory "Z".
std::optional<Timestamp> parse_timestamp(std::string_view s) {
  if (s.size() < 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
      s[16] != ':') {
    return std::nullopt;
  }
  auto y = digits(s, 0, 4), mo = digits(s, 5, 2), d = digits(s, 8, 2);
  auto h = digits(s, 11, 2), mi = digits(s, 14, 2), sec = digits(s, 17, 2);
  if (!y || !mo || !d || !h || !mi || !sec) return std::nullopt;
  size_t pos = 19;
  if (s[pos] == '.') {
    ++pos;
    size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) return std::nullopt;
  }
  if (pos + 1 != s.size() || s[pos] != 'Z') return std::nullopt;

  std::chrono::year_month_day ymd{std::chrono::year{*y},
                                  std::chrono::month{static_cast<unsigned>(*mo)},
                                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59 || *sec > 59) return std::nullopt;
  return std::chrono::sys_days{ymd} + std::chrono::hours{*h} +
         std::chrono::minutes{*mi} + std::chrono::seconds{*sec};
}

Json decision_to_json(const CurationDecision& d) {
  Json j;
  j["decision_id"] = d.decision_id;
  j["finding_id"] = d.finding_id;
  j["content_hash"] = d.content_hash;
  j["verdict"] = verdict_name(d.verdict);
  j["affected_claims"] = d.affected_claims;
  j["category_label"] = d.category_label ? Json(*d.category_label) : Json(nullptr);
  j["curator"] = d.curator;
  j["timestamp"] = format_timestamp(d.timestamp);
  j["note"] = d.note ? Json(*d.note) : Json(nullptr);
  return j;
}

CurationDecision decision_from_json(const Json& j) {
  if (!j.is_object()) malformed("decision must be a JSON object");
  auto str = [&](const char* key, bool required) -> std::optional<std::string> {
    if (!j.contains(key) || j.at(key).is_null()) {
      if (required) malformed(fmt::format("missing field '{}'", key));
      return std::nullopt;
    }
    if (!j.at(key).is_string()) malformed(fmt::format("field '{}' must be a string", key));
    return j.at(key).get<std::string>();
  };

  CurationDecision d;
  d.decision_id = str("decision_id", false).value_or("");
  d.finding_id = *str("finding_id", true);
  d.content_hash = *str("content_hash", true);
  auto verdict = parse_verdict(*str("verdict", true));
  if (!verdict) malformed(fmt::format("unknown verdict '{}'", j.at("verdict").get<std::string>()));
  d.verdict = *verdict;
  if (j.contains("affected_claims") && !j.at("affected_claims").is_null()) {
    const auto& arr = j.at("affected_claims");
    if (!arr.is_array()) malformed("affected_claims must be an array");
    for (const auto& v : arr) {
      if (!v.is_string()) malformed("affected_claims must hold predication ids");
      d.affected_claims.push_back(v.get<std::string>());
    }
  }
  d.category_label = str("category_label", false);
  d.curator = str("curator", false).value_or("");
  if (auto ts = str("timestamp", false)) {
    auto parsed = parse_timestamp(*ts);
    if (!parsed) malformed(fmt::format("bad timestamp '{}'", *ts));
    d.timestamp = *parsed;
  }
  d.note = str("note", false);
  return d;
}

DecisionLog::DecisionLog(std::filesystem::path path) : path_(std::move(path)) {
  auto r = replay(path_);
  decisions_ = std::move(r.decisions);
  warnings_ = std::move(r.warnings);
  std::error_code ec;
  auto size = std::filesystem::file_size(path_, ec);
  if (!ec && size > r.valid_bytes) {
    std::filesystem::resize_file(path_, r.valid_bytes);
    warnings_.push_back(fmt::format("{}: dropped {} bytes of an interrupted append",
                                    path_.string(), size - r.valid_bytes));
  }
}

const CurationDecision& DecisionLog::append(CurationDecision d) {
  if (d.decision_id.empty()) d.decision_id = fmt::format("D{:06d}", decisions_.size() + 1);
  std::string line = decision_to_json(d).dump() + '\n';

  int fd = ::open(path_.c_str(), O_RDWR | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw std::runtime_error(
        fmt::format("cannot open {}: {}", path_.string(), std::strerror(errno)));
  }
  try {
    // A previous interrupted append may have left a partial record; start on
    // a fresh line so it stays isolated.
    if (off_t end = ::lseek(fd, 0, SEEK_END); end > 0) {
      char last = '\n';
      if (::pread(fd, &last, 1, end - 1) == 1 && last != '\n') {
        line.insert(line.begin(), '\n');
      }
    }
    write_all(fd, line, path_);
    if (::fsync(fd) != 0) {
      throw std::runtime_error(
          fmt::format("cannot sync {}: {}", path_.string(), std::strerror(errno)));
    }
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  decisions_.push_back(std::move(d));
  return decisions_.back();
}

ReplayResult DecisionLog::replay(const std::filesystem::path& path) {
  ReplayResult result;
  std::ifstream in(path, std::ios::binary);
  if (!in) return result;
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();

  size_t line_no = 0;
  size_t pos = 0;
  while (pos < data.size()) {
    size_t nl = data.find('\n', pos);
    bool complete = nl != std::string::npos;
    std::string_view line(data.data() + pos, (complete ? nl : data.size()) - pos);
    pos = complete ? nl + 1 : data.size();
    ++line_no;
    if (text::trim(line).empty()) {
      if (complete) result.valid_bytes = pos;
      continue;
    }
    try {
      result.decisions.push_back(decision_from_json(Json::parse(line)));
      result.valid_bytes = pos;
    } catch (const std::exception& e) {
      // Records are only ever followed by more records, so a broken line in
      // the middle is corruption rather than an interrupted write.
      bool trailing = !complete || text::trim(std::string_view(data).substr(pos)).empty();
      if (!trailing && complete) {
        throw CurationError(Kind::malformed,
                            fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
      }
      result.warnings.push_back(
          fmt::format("{}:{}: ignoring incomplete trailing record", path.string(), line_no));
    }
  }
  return result;
}

FindingIndex::FindingIndex(const FindingSet& findings) {
  for (const auto& f : findings.contradictions) {
    hashes_[f.id] = f.content_hash;
    auto& ids = claims_[f.id];
    collect_ids(f.excitatory, ids);
    collect_ids(f.inhibitory, ids);
  }
  for (const auto& f : findings.diversity) {
    hashes_[f.id] = f.content_hash;
    collect_ids(f.labels, claims_[f.id]);
  }
  for (const auto& f : findings.apparent) {
    hashes_[f.id] = f.content_hash;
    claims_[f.id].push_back(f.claim.predication_id);
  }
}

const std::string& FindingIndex::content_hash(std::string_view id) const {
  return hashes_.at(std::string(id));
}

const std::vector<std::string>& FindingIndex::claim_ids(std::string_view id) const {
  return claims_.at(std::string(id));
}

void validate_decision(const CurationDecision& d, const FindingIndex& index) {
  if (!index.contains(d.finding_id)) {
    throw CurationError(Kind::unknown_finding,
                        fmt::format("unknown finding '{}'", d.finding_id));
  }
  if (text::trim(d.curator).empty()) malformed("curator is required");
  if (d.content_hash.empty()) malformed("content_hash is required");
  if (d.verdict == Verdict::valid && !d.affected_claims.empty()) {
    malformed("a valid verdict takes no affected claims");
  }
  const auto& ids = index.claim_ids(d.finding_id);
  std::set<std::string> seen;
  for (const auto& c : d.affected_claims) {
    if (std::find(ids.begin(), ids.end(), c) == ids.end()) {
      malformed(fmt::format("claim '{}' is not evidence of finding {}", c, d.finding_id));
    }
    if (!seen.insert(c).second) malformed(fmt::format("claim '{}' listed twice", c));
  }
  if (d.content_hash != index.content_hash(d.finding_id)) {
    throw CurationError(Kind::conflict,
                        fmt::format("finding {} changed since it was reviewed", d.finding_id));
  }
}

const CurationDecision& record_decision(DecisionLog& log, CurationDecision d,
                                        const FindingIndex& index) {
  validate_decision(d, index);
  return log.append(std::move(d));
}

std::map<std::string, const CurationDecision*> effective_decisions(
    const std::vector<CurationDecision>& decisions) {
  std::map<std::string, const CurationDecision*> out;
  for (const auto& d : decisions) {
    auto [it, inserted] = out.emplace(d.finding_id, &d);
    // Later in the log wins ties, so only an older timestamp loses.
    if (!inserted && d.timestamp >= it->second->timestamp) it->second = &d;
  }
  return out;
}

CurationResult apply_decisions(const FindingSet& findings, const UnitMap& units,
                               const std::vector<CurationDecision>& decisions,
                               const PolarityTable& polarity,
                               const DetectorOptions& options) {
  CurationResult result;
  FindingIndex index(findings);

  // Only decisions that still match their finding take part.
  std::vector<CurationDecision> live;
  for (const auto& d : decisions) {
    if (!index.contains(d.finding_id)) {
      result.warnings.push_back(
          fmt::format("decision {} refers to unknown finding {}", d.decision_id, d.finding_id));
    } else if (d.content_hash != index.content_hash(d.finding_id)) {
      result.warnings.push_back(fmt::format("decision {} is stale for finding {}",
                                            d.decision_id, d.finding_id));
    } else {
      live.push_back(d);
    }
  }
  auto effective = effective_decisions(live);
  std::map<std::string, std::vector<std::string>> history;
  for (const auto& d : live) history[d.finding_id].push_back(d.decision_id);

  std::map<PairKey, std::vector<const KnowledgeUnit*>> by_pair;
  for (const auto& [key, unit] : units) {
    by_pair[PairKey{key.subject_cui, key.object_cui}].push_back(&unit);
  }

  auto status_for = [&](const std::string& id, CurationState state,
                        const CurationDecision* d) {
    CurationStatus s;
    s.state = state;
    if (auto it = history.find(id); it != history.end()) s.applied_decisions = it->second;
    if (d) s.category_label = d->category_label;
    return s;
  };
  auto decision_of = [&](const std::string& id) -> const CurationDecision* {
    auto it = effective.find(id);
    return it == effective.end() ? nullptr : it->second;
  };

  // Outcome of removing claims from a pair: what the detectors see afterwards.
  struct Redetected {
    std::optional<ContradictionFinding> contradiction;
    std::optional<DiversityFinding> diversity;
  };
  auto redetect = [&](const PairKey& pair, const CurationDecision& d) {
    std::set<std::string> removed(d.affected_claims.begin(), d.affected_claims.end());
    static const std::vector<const KnowledgeUnit*> kNone;
    auto it = by_pair.find(pair);
    UnitMap sub = pair_units_without(it == by_pair.end() ? kNone : it->second, removed);
    Redetected r;
    if (auto c = detect_contradictions(sub, polarity, options); !c.empty()) {
      r.contradiction = std::move(c.front());
    } else if (auto v = detect_diversity(sub, polarity, options); !v.empty()) {
      r.diversity = std::move(v.front());
    }
    return r;
  };

  // Findings keep the content hash curators reviewed, so later decisions in
  // the same log still match after a partial invalidation.
  auto place_diversity = [&](DiversityFinding f, const std::string& hash,
                             CurationStatus status) {
    f.content_hash = hash;
    f.status = std::move(status);
    result.curated.diversity.push_back(std::move(f));
  };

  for (const auto& f : findings.contradictions) {
    const CurationDecision* d = decision_of(f.id);
    if (!d) {
      auto copy = f;
      copy.status = status_for(f.id, CurationState::pending, nullptr);
      result.curated.contradictions.push_back(std::move(copy));
    } else if (d->verdict == Verdict::valid) {
      auto copy = f;
      copy.status = status_for(f.id, CurationState::accepted, d);
      result.curated.contradictions.push_back(std::move(copy));
    } else if (d->invalidates_whole_finding()) {
      auto copy = f;
      copy.status = status_for(f.id, CurationState::rejected, d);
      result.rejected.contradictions.push_back(std::move(copy));
    } else {
      auto r = redetect(f.pair, *d);
      if (r.contradiction) {
        r.contradiction->content_hash = f.content_hash;
        r.contradiction->status = status_for(f.id, CurationState::accepted, d);
        result.curated.contradictions.push_back(std::move(*r.contradiction));
      } else if (r.diversity) {
        place_diversity(std::move(*r.diversity), f.content_hash,
                        status_for(f.id, CurationState::reclassified, d));
      } else {
        auto copy = f;
        copy.status = status_for(f.id, CurationState::rejected, d);
        result.rejected.contradictions.push_back(std::move(copy));
      }
    }
  }

  for (const auto& f : findings.diversity) {
    const CurationDecision* d = decision_of(f.id);
    // A finding that was already reclassified stays reclassified while it
    // remains a diversity finding.
    const auto kept = f.status.state == CurationState::reclassified
                          ? CurationState::reclassified
                          : CurationState::accepted;
    if (!d) {
      auto copy = f;
      copy.status = status_for(f.id, CurationState::pending, nullptr);
      result.curated.diversity.push_back(std::move(copy));
    } else if (d->verdict == Verdict::valid) {
      auto copy = f;
      copy.status = status_for(f.id, kept, d);
      result.curated.diversity.push_back(std::move(copy));
    } else if (d->invalidates_whole_finding()) {
      auto copy = f;
      copy.status = status_for(f.id, CurationState::rejected, d);
      result.rejected.diversity.push_back(std::move(copy));
    } else {
      auto r = redetect(f.pair, *d);
      if (r.diversity) {
        place_diversity(std::move(*r.diversity), f.content_hash, status_for(f.id, kept, d));
      } else {
        // Removing claims cannot create a cross-group pair, so anything
        // else means the pair no longer qualifies.
        auto copy = f;
        copy.status = status_for(f.id, CurationState::rejected, d);
        result.rejected.diversity.push_back(std::move(copy));
      }
    }
  }

  for (const auto& f : findings.apparent) {
    const CurationDecision* d = decision_of(f.id);
    auto copy = f;
    if (!d) {
      copy.status = status_for(f.id, CurationState::pending, nullptr);
      result.curated.apparent.push_back(std::move(copy));
    } else if (d->verdict == Verdict::valid) {
      copy.status = status_for(f.id, CurationState::accepted, d);
      result.curated.apparent.push_back(std::move(copy));
    } else {
      // The only claim of an apparent finding is either named or implied.
      copy.status = status_for(f.id, CurationState::rejected, d);
      result.rejected.apparent.push_back(std::move(copy));
    }
  }

  auto by_pair_order = [](const auto& a, const auto& b) { return a.pair < b.pair; };
  std::sort(result.curated.diversity.begin(), result.curated.diversity.end(),
            by_pair_order);
  return result;
}

}  // namespace knowcert
