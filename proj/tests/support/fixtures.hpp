// Access to the bundled data directory and the published-example fixtures.
#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "knowcert/pipeline.hpp"
#include "synthetic.hpp"

namespace knowcert::testing {

std::filesystem::path data_dir();
std::filesystem::path fixture_dir(const std::string& name);

const PipelineConfig& default_config();

// Pipeline options used throughout the tests: hedged claims excluded.
UnitOptions test_unit_options();

ClaimCorpus load_fixture(const std::string& name);
PipelineRun run_fixture(const std::string& name);

// Runs ingest -> detect from TSV text and renders findings.jsonl plus every
// report in every format, keyed by "findings.jsonl", "contradictions.csv",
// "summary.md", and so on.
std::map<std::string, std::string> render_all(const TsvInputs& inputs);

// A scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace knowcert::testing
