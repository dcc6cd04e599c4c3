#include "knowcert/claim_filter.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include <fmt/format.h>

#include "knowcert/text.hpp"

namespace knowcert {

namespace {

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& v : small) {
    if (large.contains(v)) return true;
  }
  return false;
}

std::set<std::string> trimmed_set(const std::set<std::string>& values) {
  std::set<std::string> out;
  for (const auto& v : values) out.emplace(text::trim(v));
  return out;
}

// Reads one double-quoted string starting at s[pos] == '"'.
std::string read_quoted(const std::string& s, size_t& pos, size_t line_no) {
  std::string out;
  ++pos;
  while (pos < s.size()) {
    char c = s[pos++];
    if (c == '"') return out;
    if (c == '\\' && pos < s.size()) {
      char e = s[pos++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: out += e; break;
      }
      continue;
    }
    out += c;
  }
  throw ConfigError(fmt::format("line {}: unterminated string", line_no));
}

std::set<std::string> take(FlatConfig& config, const std::string& key) {
  std::set<std::string> out;
  if (auto it = config.find(key); it != config.end()) {
    out.insert(it->second.begin(), it->second.end());
    config.erase(it);
  }
  return out;
}

void reject_unknown(const FlatConfig& rest) {
  if (!rest.empty()) {
    throw ConfigError(fmt::format("unknown key '{}'", rest.begin()->first));
  }
}

}  // namespace

FlatConfig parse_flat_config(std::istream& in) {
  FlatConfig config;
  std::string line;
  size_t line_no = 0;
  std::string key;
  bool in_array = false;

  while (std::getline(in, line)) {
    ++line_no;
    size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < line.size() &&
             (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
        ++pos;
      }
    };
    skip_ws();
    if (!in_array) {
      if (pos >= line.size() || line[pos] == '#') continue;
      size_t eq = line.find('=', pos);
      if (eq == std::string::npos) {
        throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
      }
      key = std::string(text::trim(std::string_view(line).substr(pos, eq - pos)));
      if (key.empty()) {
        throw ConfigError(fmt::format("line {}: empty key", line_no));
      }
      if (config.contains(key)) {
        throw ConfigError(fmt::format("line {}: duplicate key '{}'", line_no, key));
      }
      config[key];
      pos = eq + 1;
      skip_ws();
      if (pos < line.size() && line[pos] == '"') {
        config[key].push_back(read_quoted(line, pos, line_no));
        skip_ws();
        if (pos < line.size() && line[pos] != '#') {
          throw ConfigError(fmt::format("line {}: trailing characters", line_no));
        }
        continue;
      }
      if (pos >= line.size() || line[pos] != '[') {
        throw ConfigError(
            fmt::format("line {}: value must be a string or a list", line_no));
      }
      ++pos;
      in_array = true;
    }
    // Inside a list: strings separated by commas until ']'.
    while (in_array) {
      skip_ws();
      if (pos >= line.size() || line[pos] == '#') break;
      char c = line[pos];
      if (c == ']') {
        in_array = false;
        ++pos;
        skip_ws();
        if (pos < line.size() && line[pos] != '#') {
          throw ConfigError(fmt::format("line {}: trailing characters", line_no));
        }
      } else if (c == ',') {
        ++pos;
      } else if (c == '"') {
        config[key].push_back(read_quoted(line, pos, line_no));
      } else {
        throw ConfigError(
            fmt::format("line {}: unexpected '{}' in list", line_no, c));
      }
    }
  }
  if (in_array) {
    throw ConfigError(fmt::format("unterminated list for key '{}'", key));
  }
  return config;
}

EvidencePolicy evidence_policy_from_config(const FlatConfig& config) {
  FlatConfig rest = config;
  EvidencePolicy policy;
  policy.publication_types = trimmed_set(take(rest, "publication_types"));
  policy.mesh_topics = trimmed_set(take(rest, "mesh_topics"));
  if (auto mode = take(rest, "match_mode"); !mode.empty()) {
    if (mode != std::set<std::string>{"any"}) {
      throw ConfigError("match_mode must be \"any\"");
    }
  }
  reject_unknown(rest);
  if (policy.publication_types.empty() && policy.mesh_topics.empty()) {
    throw ConfigError("evidence policy lists no publication types or MeSH topics");
  }
  return policy;
}

EvidencePolicy load_evidence_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open {}", path.string()));
  try {
    return evidence_policy_from_config(parse_flat_config(in));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::set<std::string> read_cui_list(std::istream& in) {
  std::set<std::string> cuis;
  std::string line;
  while (std::getline(in, line)) {
    auto body = std::string_view(line).substr(0, line.find('#'));
    body = text::trim(body);
    if (!body.empty()) cuis.emplace(body);
  }
  return cuis;
}

ConceptPolicy load_concept_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open {}", path.string()));
  FlatConfig rest;
  try {
    rest = parse_flat_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  ConceptPolicy policy;
  policy.subject_semtypes = take(rest, "subject_semtypes");
  policy.object_semtypes = take(rest, "object_semtypes");
  policy.excluded_subject_cuis = take(rest, "excluded_subject_cuis");
  auto files = take(rest, "excluded_subject_cuis_file");
  reject_unknown(rest);
  for (const auto& file : files) {
    auto cui_path = path.parent_path() / file;
    std::ifstream cin(cui_path);
    if (!cin) throw ConfigError(fmt::format("cannot open {}", cui_path.string()));
    auto cuis = read_cui_list(cin);
    policy.excluded_subject_cuis.insert(cuis.begin(), cuis.end());
  }
  if (policy.subject_semtypes.empty() || policy.object_semtypes.empty()) {
    throw ConfigError(fmt::format(
        "{}: subject_semtypes and object_semtypes must be non-empty",
        path.string()));
  }
  return policy;
}

bool matches_evidence(const ArticleMetadata& meta, const EvidencePolicy& policy) {
  for (const auto& pt : meta.publication_types) {
    if (policy.publication_types.contains(std::string(text::trim(pt)))) return true;
  }
  for (const auto& mh : meta.mesh_headings) {
    if (policy.mesh_topics.contains(std::string(text::trim(mh)))) return true;
  }
  return false;
}

bool is_drug_disease(const PredicationRecord& p, const ConceptPolicy& policy) {
  return intersects(p.subject.semantic_types, policy.subject_semtypes) &&
         intersects(p.object.semantic_types, policy.object_semtypes) &&
         !policy.excluded_subject_cuis.contains(p.subject.cui);
}

ClaimCorpus filter_corpus(ClaimCorpus&& corpus, const EvidencePolicy& ep,
                          const ConceptPolicy& cp) {
  ClaimCorpus out;
  out.quarantine = std::move(corpus.quarantine);
  std::map<std::string, bool> article_ok;
  for (const auto& [id, meta] : corpus.articles) {
    article_ok.emplace(id, matches_evidence(meta, ep));
  }
  // Survivors are compacted in place; their sentences and articles change
  // hands as map nodes.
  auto& preds = corpus.predications;
  std::size_t kept = 0;
  for (auto& p : preds) {
    if (!article_ok.at(p.article_id) || !is_drug_disease(p, cp)) continue;
    if (!out.sentences.contains(p.sentence_id)) {
      out.sentences.insert(corpus.sentences.extract(p.sentence_id));
    }
    if (!out.articles.contains(p.article_id)) {
      out.articles.insert(corpus.articles.extract(p.article_id));
    }
    if (&preds[kept] != &p) preds[kept] = std::move(p);
    ++kept;
  }
  preds.resize(kept);
  preds.shrink_to_fit();
  out.predications = std::move(preds);
  return out;
}

ClaimCorpus filter_corpus(const ClaimCorpus& corpus, const EvidencePolicy& ep,
                          const ConceptPolicy& cp) {
  return filter_corpus(ClaimCorpus(corpus), ep, cp);
}

}  // namespace knowcert
