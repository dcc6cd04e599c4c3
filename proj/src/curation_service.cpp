#include "knowcert/curation_service.hpp"

#include <httplib.h>

#include <algorithm>
#include <mutex>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "knowcert/findings_io.hpp"
#include "knowcert/text.hpp"

namespace knowcert {

namespace {

HttpResponse json_response(int status, const Json& body) {
  return {status, body.dump(), "application/json"};
}

HttpResponse error_response(int status, const std::string& message) {
  Json j;
  j["error"] = message;
  return json_response(status, j);
}

int http_status(CurationError::Kind kind) {
  switch (kind) {
    case CurationError::Kind::malformed: return 400;
    case CurationError::Kind::unknown_finding: return 404;
    case CurationError::Kind::conflict: return 409;
  }
  return 400;
}

// Browsers index strings in UTF-16 code units; hits carry both offsets.
std::size_t utf16_length(std::string_view s) {
  std::size_t n = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    auto c = static_cast<unsigned char>(s[i]);
    if ((c & 0xC0) == 0x80) continue;  // continuation byte
    n += c >= 0xF0 ? 2 : 1;
  }
  return n;
}

Json hits_json(const std::vector<CueHit>& hits, std::string_view text) {
  Json arr = Json::array();
  for (const auto& h : hits) {
    Json j;
    j["term"] = h.term;
    j["offset"] = h.offset;
    j["length"] = h.term.size();
    j["utf16_offset"] = utf16_length(text.substr(0, h.offset));
    j["utf16_length"] = utf16_length(text.substr(h.offset, h.term.size()));
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<std::string> path_segments(std::string_view path) {
  std::vector<std::string> out;
  for (auto s : text::split(path, '/')) {
    if (!s.empty()) out.emplace_back(s);
  }
  return out;
}

}  // namespace

CurationService::CurationService(ServiceData data, std::filesystem::path log_path)
    : data_(std::move(data)),
      working_units_(data_.units.working_units()),
      index_(data_.findings),
      objects_(data_.units.objects()),
      log_(log_path),
      clock_([] {
        return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
      }) {
  replay_warnings_ = log_.warnings();
  std::unique_lock lock(mutex_);
  rebuild();
}

void CurationService::rebuild() {
  auto result = apply_decisions(data_.findings, working_units_, log_.decisions(),
                                data_.polarity, data_.options);
  for (const auto& w : result.warnings) spdlog::warn("{}", w);

  current_ = std::move(result.curated);
  auto move_all = [](auto& dst, auto& src) {
    std::move(src.begin(), src.end(), std::back_inserter(dst));
  };
  // Statuses of objects come from surviving findings only.
  std::map<std::string, KnowledgeObject> touched;
  auto touch = [&](const UnitKey& key) {
    auto id = object_id(key, data_.units.corpus_version);
    if (auto it = objects_.find(id); it != objects_.end()) {
      touched.emplace(id, it->second);
    }
  };
  for (const auto& f : current_.contradictions) {
    for (const auto& s : f.excitatory) touch({f.pair.subject_cui, s.predicate, f.pair.object_cui});
    for (const auto& s : f.inhibitory) touch({f.pair.subject_cui, s.predicate, f.pair.object_cui});
  }
  for (const auto& f : current_.diversity) {
    for (const auto& s : f.labels) touch({f.pair.subject_cui, s.predicate, f.pair.object_cui});
  }
  for (const auto& f : current_.apparent) touch(f.unit_key);
  object_statuses_.clear();
  for (auto& [id, obj] : mark_statuses(std::move(touched), current_)) {
    object_statuses_[id] = obj.statuses;
  }

  move_all(current_.contradictions, result.rejected.contradictions);
  move_all(current_.diversity, result.rejected.diversity);
  move_all(current_.apparent, result.rejected.apparent);

  located_.clear();
  for (size_t i = 0; i < current_.contradictions.size(); ++i) {
    located_[current_.contradictions[i].id] = {FindingType::contradiction, i};
  }
  for (size_t i = 0; i < current_.diversity.size(); ++i) {
    located_[current_.diversity[i].id] = {FindingType::diversity, i};
  }
  for (size_t i = 0; i < current_.apparent.size(); ++i) {
    located_[current_.apparent[i].id] = {FindingType::apparent, i};
  }
}

FindingSet CurationService::current_findings() const {
  std::shared_lock lock(mutex_);
  return current_;
}

HttpResponse CurationService::handle(const HttpRequest& req) {
  auto seg = path_segments(req.path);
  if (seg.size() < 3 || seg[0] != "api" || seg[1] != "v1") {
    return error_response(404, "no such endpoint");
  }
  const std::string& resource = seg[2];
  const bool get = req.method == "GET";
  try {
    if (resource == "findings" && seg.size() == 3) {
      if (!get) return error_response(405, "method not allowed");
      std::shared_lock lock(mutex_);
      return list_findings(req);
    }
    if (resource == "findings" && seg.size() == 4) {
      if (!get) return error_response(405, "method not allowed");
      std::shared_lock lock(mutex_);
      return get_finding(seg[3]);
    }
    if (resource == "findings" && seg.size() == 5 && seg[4] == "decision") {
      if (req.method != "POST") return error_response(405, "method not allowed");
      std::unique_lock lock(mutex_);
      return post_decision(seg[3], req);
    }
    if (resource == "objects" && seg.size() == 4) {
      if (!get) return error_response(405, "method not allowed");
      std::shared_lock lock(mutex_);
      return get_object(seg[3]);
    }
    if (resource == "stats" && seg.size() == 3) {
      if (!get) return error_response(405, "method not allowed");
      std::shared_lock lock(mutex_);
      return stats();
    }
  } catch (const CurationError& e) {
    return error_response(http_status(e.kind()), e.what());
  } catch (const std::exception& e) {
    spdlog::error("{} {}: {}", req.method, req.path, e.what());
    return error_response(500, "internal error");
  }
  return error_response(404, "no such endpoint");
}

Json CurationService::finding_json(const std::string& id) const {
  const Located& loc = located_.at(id);
  switch (loc.type) {
    case FindingType::contradiction: return finding_to_json(current_.contradictions[loc.index]);
    case FindingType::diversity: return finding_to_json(current_.diversity[loc.index]);
    case FindingType::apparent: return finding_to_json(current_.apparent[loc.index]);
  }
  return {};
}

HttpResponse CurationService::list_findings(const HttpRequest& req) const {
  std::optional<FindingType> type;
  std::optional<CurationState> state;
  if (auto it = req.query.find("type"); it != req.query.end() && !it->second.empty()) {
    type = parse_finding_type(it->second);
    if (!type) return error_response(400, fmt::format("unknown type '{}'", it->second));
  }
  if (auto it = req.query.find("state"); it != req.query.end() && !it->second.empty()) {
    state = parse_state(it->second);
    if (!state) return error_response(400, fmt::format("unknown state '{}'", it->second));
  }

  Json arr = Json::array();
  auto add = [&](FindingType t, const auto& list) {
    if (type && *type != t) return;
    for (const auto& f : list) {
      if (state && f.status.state != *state) continue;
      arr.push_back(finding_to_json(f));
    }
  };
  add(FindingType::contradiction, current_.contradictions);
  add(FindingType::diversity, current_.diversity);
  add(FindingType::apparent, current_.apparent);

  Json body;
  body["count"] = arr.size();
  body["findings"] = std::move(arr);
  return json_response(200, body);
}

Json CurationService::finding_view(const std::string& id) const {
  Json evidence = Json::array();
  auto add_claim = [&](const Claim& c, std::string_view role, const Predicate& p) {
    Json e = claim_to_json(c);
    e["role"] = role;
    e["predicate"] = p.raw();
    e["pub_date"] = format_pub_date(c.pub_year, c.pub_month);
    std::string text;
    if (auto it = data_.corpus.sentences.find(c.sentence_id);
        it != data_.corpus.sentences.end()) {
      text = it->second.text;
    }
    auto tags = tag_sentence(text, data_.lexicon);
    e["text"] = text;
    e["hedge_hits"] = hits_json(tags.hedge_hits, text);
    e["disagreement_hits"] = hits_json(tags.disagreement_hits, text);
    evidence.push_back(std::move(e));
  };
  auto add_side = [&](const std::vector<PredicateSupport>& side, std::string_view role) {
    for (const auto& s : side) {
      for (const auto& c : s.claims) add_claim(c, role, s.predicate);
    }
  };

  const Located& loc = located_.at(id);
  switch (loc.type) {
    case FindingType::contradiction: {
      const auto& f = current_.contradictions[loc.index];
      add_side(f.excitatory, "excitatory");
      add_side(f.inhibitory, "inhibitory");
      break;
    }
    case FindingType::diversity:
      add_side(current_.diversity[loc.index].labels, "label");
      break;
    case FindingType::apparent: {
      const auto& f = current_.apparent[loc.index];
      add_claim(f.claim, "claim", f.unit_key.predicate);
      break;
    }
  }

  Json history = Json::array();
  for (const auto& d : log_.decisions()) {
    if (d.finding_id == id) history.push_back(decision_to_json(d));
  }

  Json j;
  j["finding"] = finding_json(id);
  j["evidence"] = std::move(evidence);
  j["history"] = std::move(history);
  return j;
}

HttpResponse CurationService::get_finding(const std::string& id) const {
  if (!located_.contains(id)) return error_response(404, fmt::format("unknown finding '{}'", id));
  return json_response(200, finding_view(id));
}

HttpResponse CurationService::post_decision(const std::string& id, const HttpRequest& req) {
  if (!located_.contains(id)) return error_response(404, fmt::format("unknown finding '{}'", id));
  Json body;
  try {
    body = Json::parse(req.body);
  } catch (const std::exception& e) {
    return error_response(400, fmt::format("body is not JSON: {}", e.what()));
  }
  if (!body.is_object()) return error_response(400, "body must be a JSON object");
  if (body.contains("finding_id") && body["finding_id"] != id) {
    return error_response(400, "finding_id does not match the URL");
  }
  body["finding_id"] = id;
  // Identity and time are assigned here, not by the client.
  body.erase("decision_id");
  body.erase("timestamp");
  if (auto it = req.headers.find("x-curator"); it != req.headers.end()) {
    body["curator"] = it->second;
  }

  CurationDecision d = decision_from_json(body);
  d.timestamp = clock_();
  const CurationDecision& stored = record_decision(log_, std::move(d), index_);
  Json decision = decision_to_json(stored);
  rebuild();

  Json out;
  out["decision"] = std::move(decision);
  out["finding"] = finding_json(id);
  return json_response(201, out);
}

HttpResponse CurationService::get_object(const std::string& id) const {
  auto it = objects_.find(id);
  if (it == objects_.end()) return error_response(404, fmt::format("unknown object '{}'", id));
  KnowledgeObject obj = it->second;
  if (auto s = object_statuses_.find(id); s != object_statuses_.end()) {
    obj.statuses.insert(s->second.begin(), s->second.end());
  }
  return json_response(200,
                       object_to_json(obj, timeline(obj.unit, data_.units.score_mode)));
}

HttpResponse CurationService::stats() const {
  const CurationState states[] = {CurationState::pending, CurationState::accepted,
                                  CurationState::rejected, CurationState::reclassified};
  Json by_state = Json::object();
  for (auto s : states) by_state[std::string(state_name(s))] = 0;

  Json by_type = Json::object();
  auto count = [&](FindingType t, const auto& list) {
    Json j = Json::object();
    for (auto s : states) j[std::string(state_name(s))] = 0;
    for (const auto& f : list) {
      auto name = std::string(state_name(f.status.state));
      j[name] = j[name].template get<std::size_t>() + 1;
      by_state[name] = by_state[name].template get<std::size_t>() + 1;
    }
    j["total"] = list.size();
    by_type[std::string(finding_type_name(t))] = std::move(j);
  };
  count(FindingType::contradiction, current_.contradictions);
  count(FindingType::diversity, current_.diversity);
  count(FindingType::apparent, current_.apparent);

  Json by_status = Json::object();
  for (auto s : {UncertaintyStatus::Hedging, UncertaintyStatus::Diversity,
                 UncertaintyStatus::ControversyContradiction}) {
    by_status[std::string(status_name(s))] = 0;
  }
  for (const auto& [id, obj] : objects_) {
    auto statuses = obj.statuses;
    if (auto it = object_statuses_.find(id); it != object_statuses_.end()) {
      statuses.insert(it->second.begin(), it->second.end());
    }
    for (auto s : statuses) {
      auto name = std::string(status_name(s));
      by_status[name] = by_status[name].get<std::size_t>() + 1;
    }
  }

  Json j;
  j["findings"] = std::move(by_type);
  j["states"] = std::move(by_state);
  j["objects"] = {{"total", objects_.size()}, {"statuses", std::move(by_status)}};
  j["decisions"] = log_.decisions().size();
  return json_response(200, j);
}

struct HttpServer::Impl {
  explicit Impl(CurationService& s) : service(s) {}
  CurationService& service;
  httplib::Server server;
};

HttpServer::HttpServer(CurationService& service,
                       std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    for (const auto& [k, v] : req.headers) r.headers.emplace(text::to_lower(k), v);
    r.body = req.body;
    HttpResponse out = impl_->service.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  auto& s = impl_->server;
  s.Get(R"(/api/.*)", forward);
  s.Post(R"(/api/.*)", forward);
  s.Put(R"(/api/.*)", forward);
  s.Delete(R"(/api/.*)", forward);
  if (static_dir && !s.set_mount_point("/", static_dir->string())) {
    throw std::runtime_error(fmt::format("cannot serve {}", static_dir->string()));
  }
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                        : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error(fmt::format("cannot bind {}:{}", host, port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace knowcert
