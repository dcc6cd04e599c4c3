#include "knowcert/pipeline.hpp"

#include <fstream>

#include <fmt/format.h>

namespace knowcert {

namespace {

template <typename Record>
void note(const ParseResult<Record>& r, std::string_view file,
          std::vector<std::string>& out) {
  for (const auto& d : r.errors) out.push_back(fmt::format("{}:{}: {}", file, d.line, d.message));
  for (const auto& d : r.warnings) {
    out.push_back(fmt::format("{}:{}: warning: {}", file, d.line, d.message));
  }
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  return in;
}

}  // namespace

IngestResult ingest(std::istream& predications, std::istream& sentences,
                    std::istream& articles, bool strict) {
  auto spec = [strict](FormatSpec f) {
    f.strict = strict;
    return f;
  };
  auto p = parse_predications(predications, spec(FormatSpec::predications()));
  auto s = parse_sentences(sentences, spec(FormatSpec::sentences()));
  auto a = parse_metadata(articles, spec(FormatSpec::articles()));

  IngestResult result;
  note(p, "predications", result.diagnostics);
  note(s, "sentences", result.diagnostics);
  note(a, "articles", result.diagnostics);
  result.corpus = link(std::move(p.records), std::move(s.records), std::move(a.records), strict);
  for (const auto& q : result.corpus.quarantine) {
    result.diagnostics.push_back(
        fmt::format("quarantined predication {}: {}", q.record.predication_id, q.reason));
  }
  return result;
}

IngestResult ingest_files(const std::filesystem::path& predications,
                          const std::filesystem::path& sentences,
                          const std::filesystem::path& articles, bool strict) {
  auto p = open(predications);
  auto s = open(sentences);
  auto a = open(articles);
  return ingest(p, s, a, strict);
}

UnitStore build_unit_store(const ClaimCorpus& corpus, const CueMap& tags,
                           const UnitOptions& options) {
  auto built = build_units(corpus, tags);
  UnitStore store;
  store.corpus_version = options.corpus_version;
  store.score_mode = options.score_mode;
  store.hedged_excluded = options.exclude_hedged;
  store.exclusion_mode = options.exclusion_mode;
  store.units = std::move(built.units);
  store.collapsed = std::move(built.collapsed);
  return store;
}

FindingSet detect(const UnitStore& store, const PolarityTable& polarity,
                  const CueMap& tags, const DetectorOptions& options) {
  if (!store.hedged_excluded) return detect_all(store.units, polarity, tags, options);
  return detect_all(store.working_units(), polarity, tags, options);
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& data_dir) {
  PipelineConfig c;
  c.evidence = load_evidence_policy(data_dir / "evidence_policy.toml");
  c.concepts = load_concept_policy(data_dir / "concept_policy.toml");
  c.lexicon = load_lexicon(data_dir / "cue_lexicon.tsv");
  c.polarity = load_polarity_table(data_dir / "polarity.tsv");
  return c;
}

PipelineRun run_pipeline(ClaimCorpus corpus, const PipelineConfig& config,
                         const UnitOptions& unit_options,
                         const DetectorOptions& detector_options) {
  PipelineRun run;
  run.filtered = filter_corpus(std::move(corpus), config.evidence, config.concepts);
  run.tags = tag_corpus(run.filtered, config.lexicon);
  run.units = build_unit_store(run.filtered, run.tags, unit_options);
  run.findings = detect(run.units, config.polarity, run.tags, detector_options);
  return run;
}

}  // namespace knowcert
