// End-to-end stages shared by the command-line tool and the tests:
// TSV ingest through findings.
#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "knowcert/claim_filter.hpp"
#include "knowcert/corpus.hpp"
#include "knowcert/cue_tagger.hpp"
#include "knowcert/detectors.hpp"
#include "knowcert/knowledge_store.hpp"
#include "knowcert/polarity.hpp"

namespace knowcert {

struct IngestResult {
  ClaimCorpus corpus;
  std::vector<std::string> diagnostics;  // skipped rows, quarantined predications
};

IngestResult ingest(std::istream& predications, std::istream& sentences,
                    std::istream& articles, bool strict = false);
IngestResult ingest_files(const std::filesystem::path& predications,
                          const std::filesystem::path& sentences,
                          const std::filesystem::path& articles, bool strict = false);

struct UnitOptions {
  std::string corpus_version = "1";
  bool exclude_hedged = false;
  HedgeExclusion exclusion_mode = HedgeExclusion::drop_claims;
  ScoreMode score_mode = ScoreMode::all;
};

UnitStore build_unit_store(const ClaimCorpus& corpus, const CueMap& tags,
                           const UnitOptions& options);

// Detector input is the store's working unit map.
FindingSet detect(const UnitStore& store, const PolarityTable& polarity,
                  const CueMap& tags, const DetectorOptions& options = {});

// The policies and tables a full run needs, loaded from a data directory
// (evidence_policy.toml, concept_policy.toml, cue_lexicon.tsv, polarity.tsv).
struct PipelineConfig {
  EvidencePolicy evidence;
  ConceptPolicy concepts;
  CueLexicon lexicon;
  PolarityTable polarity;

  static PipelineConfig load(const std::filesystem::path& data_dir);
};

struct PipelineRun {
  ClaimCorpus filtered;
  CueMap tags;
  UnitStore units;
  FindingSet findings;
};

// filter -> tag -> units -> detect, in memory.
PipelineRun run_pipeline(ClaimCorpus corpus, const PipelineConfig& config,
                         const UnitOptions& unit_options,
                         const DetectorOptions& detector_options = {});

}  // namespace knowcert
