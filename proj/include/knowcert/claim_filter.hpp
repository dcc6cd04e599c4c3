// Evidence-level and semantic-type filtering of a claim corpus.
#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "knowcert/corpus.hpp"

namespace knowcert {

enum class MatchMode { any };

// An article passes if any of its publication types or any of its MeSH
// headings is listed. Comparison is exact and case-sensitive.
struct EvidencePolicy {
  std::set<std::string> publication_types;
  std::set<std::string> mesh_topics;
  MatchMode match_mode = MatchMode::any;
};

struct ConceptPolicy {
  std::set<std::string> subject_semtypes;
  std::set<std::string> object_semtypes;
  std::set<std::string> excluded_subject_cuis;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat `key = ["a", "b"]` / `key = "value"` config, `#` comments, arrays may
// span lines. Keys map to their string list (a scalar becomes a 1-list).
using FlatConfig = std::map<std::string, std::vector<std::string>>;
FlatConfig parse_flat_config(std::istream& in);

// Keys: publication_types, mesh_topics. Throws ConfigError when both are empty
// or an unknown key is present.
EvidencePolicy load_evidence_policy(const std::filesystem::path& path);
EvidencePolicy evidence_policy_from_config(const FlatConfig& config);

// Keys: subject_semtypes, object_semtypes, optional excluded_subject_cuis and
// excluded_subject_cuis_file (resolved relative to the policy file).
ConceptPolicy load_concept_policy(const std::filesystem::path& path);

// One CUI per line, `#` starts a comment.
std::set<std::string> read_cui_list(std::istream& in);

bool matches_evidence(const ArticleMetadata& meta, const EvidencePolicy& policy);
bool is_drug_disease(const PredicationRecord& p, const ConceptPolicy& policy);

// Keeps predications passing both policies; sentences and articles left
// without a predication are dropped. The quarantine list is carried over.
ClaimCorpus filter_corpus(ClaimCorpus&& corpus, const EvidencePolicy& ep,
                          const ConceptPolicy& cp);
ClaimCorpus filter_corpus(const ClaimCorpus& corpus, const EvidencePolicy& ep,
                          const ConceptPolicy& cp);

}  // namespace knowcert
