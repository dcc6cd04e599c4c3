// Review workflow over HTTP: findings with their evidence sentences, decision
// submission, knowledge objects and counts.
#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>

#include "knowcert/corpus.hpp"
#include "knowcert/cue_tagger.hpp"
#include "knowcert/curation.hpp"
#include "knowcert/detectors.hpp"
#include "knowcert/knowledge_store.hpp"
#include "knowcert/polarity.hpp"

namespace knowcert {

struct ServiceData {
  FindingSet findings;  // detector output; decisions are validated against it
  UnitStore units;
  ClaimCorpus corpus;
  PolarityTable polarity;
  CueLexicon lexicon = CueLexicon::defaults();  // for highlight offsets
  DetectorOptions options;
};

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // names lower-cased
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Transport-independent request handling. Reads run concurrently; a decision
// submission appends to the log and rebuilds the curated state before any
// later read is served.
class CurationService {
 public:
  using Clock = std::function<Timestamp()>;

  CurationService(ServiceData data, std::filesystem::path log_path);

  HttpResponse handle(const HttpRequest& request);

  // Submission time source; defaults to the system clock.
  void set_clock(Clock clock) { clock_ = std::move(clock); }

  // Curated findings followed by rejected ones, per type.
  FindingSet current_findings() const;
  std::vector<std::string> replay_warnings() const { return replay_warnings_; }

 private:
  struct Located {
    FindingType type;
    std::size_t index;
  };

  void rebuild();  // caller holds the write lock
  HttpResponse list_findings(const HttpRequest& req) const;
  HttpResponse get_finding(const std::string& id) const;
  HttpResponse post_decision(const std::string& id, const HttpRequest& req);
  HttpResponse get_object(const std::string& id) const;
  HttpResponse stats() const;
  Json finding_json(const std::string& id) const;
  Json finding_view(const std::string& id) const;

  ServiceData data_;
  UnitMap working_units_;
  FindingIndex index_;
  std::map<std::string, KnowledgeObject> objects_;
  DecisionLog log_;
  Clock clock_;
  std::vector<std::string> replay_warnings_;

  mutable std::shared_mutex mutex_;
  FindingSet current_;
  std::map<std::string, Located> located_;
  std::map<std::string, std::set<UncertaintyStatus>> object_statuses_;
};

// Minimal HTTP front end for a CurationService; optionally serves a static
// directory (the curation console) at "/".
class HttpServer {
 public:
  HttpServer(CurationService& service, std::optional<std::filesystem::path> static_dir = {});
  ~HttpServer();

  // Port 0 picks a free port; returns the bound port. Throws on failure.
  int bind(const std::string& host, int port);
  void listen();  // blocks until stop()
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace knowcert
