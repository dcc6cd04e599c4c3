#include "fixtures.hpp"

#include <random>
#include <sstream>

#include <fmt/format.h>

#include "knowcert/findings_io.hpp"
#include "knowcert/reporting.hpp"

namespace knowcert::testing {

std::filesystem::path data_dir() { return KNOWCERT_DATA_DIR; }

std::filesystem::path fixture_dir(const std::string& name) {
  return std::filesystem::path(KNOWCERT_FIXTURE_DIR) / name;
}

const PipelineConfig& default_config() {
  static const PipelineConfig config = PipelineConfig::load(data_dir());
  return config;
}

UnitOptions test_unit_options() {
  UnitOptions o;
  o.exclude_hedged = true;
  return o;
}

ClaimCorpus load_fixture(const std::string& name) {
  auto dir = fixture_dir(name);
  return ingest_files(dir / "predications.tsv", dir / "sentences.tsv", dir / "articles.tsv",
                      true)
      .corpus;
}

PipelineRun run_fixture(const std::string& name) {
  return run_pipeline(load_fixture(name), default_config(), test_unit_options());
}

std::map<std::string, std::string> render_all(const TsvInputs& inputs) {
  std::istringstream p(inputs.predications), s(inputs.sentences), a(inputs.articles);
  auto corpus = ingest(p, s, a).corpus;
  auto run = run_pipeline(corpus, default_config(), test_unit_options());

  std::map<std::string, std::string> out;
  out["findings.jsonl"] = findings_jsonl(run.findings);
  const std::pair<const char*, Report> reports[] = {
      {"contradictions", contradiction_table(run.findings)},
      {"diversity", diversity_histogram(run.findings)},
      {"apparent", apparent_table(run.findings, &run.filtered)},
      {"summary", summary_report(summary(&corpus, &run.units, run.findings))},
  };
  for (const auto& [kind, report] : reports) {
    out[fmt::format("{}.csv", kind)] = render_csv(report);
    out[fmt::format("{}.json", kind)] = render_json(report);
    out[fmt::format("{}.md", kind)] = render_md(report);
  }
  return out;
}

TempDir::TempDir() {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          fmt::format("knowcert-test-{:016x}", (std::uint64_t{rd()} << 32) | rd());
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace knowcert::testing
