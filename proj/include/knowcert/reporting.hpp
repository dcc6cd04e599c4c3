// Result tables and summary statistics over curated findings, rendered
// as CSV, JSON or Markdown.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "knowcert/corpus.hpp"
#include "knowcert/detectors.hpp"
#include "knowcert/knowledge_store.hpp"

namespace knowcert {

struct ReportColumn {
  std::string name;
  // CUIs and ids: kept in CSV/JSON, dropped from Markdown.
  bool machine_only = false;
};

struct ReportRow {
  std::vector<std::pair<std::string, std::string>> columns;

  const std::string& value(std::string_view name) const;
};

struct Report {
  std::string kind;
  std::vector<ReportColumn> columns;
  std::vector<ReportRow> rows;
};

enum class ReportFormat { csv, json, md };
std::optional<ReportFormat> parse_report_format(std::string_view name);

enum class ReportKind { contradictions, diversity, apparent, summary };
std::optional<ReportKind> parse_report_kind(std::string_view name);

// "PREDISPOSES (1) NEG_PREDISPOSES (1)": Excitatory side, then Inhibitory,
// each ordered by predicate name.
std::string predicate_list(const ContradictionFinding& f);

// Rejected findings are left out of every table.
Report contradiction_table(const FindingSet& findings);

// One row per distinct label set ("PREVENTS, TREATS") with its pair count,
// most frequent first.
Report diversity_histogram(const FindingSet& findings);

// Rows ordered by publication date (undated last); `corpus` supplies the
// sentence texts and may be null.
Report apparent_table(const FindingSet& findings, const ClaimCorpus* corpus);

struct SummaryStats {
  std::size_t predications = 0;
  std::size_t sentences = 0;
  std::size_t articles = 0;
  std::size_t units = 0;
  std::size_t claims = 0;
  std::size_t hedged_claims_filtered = 0;
  std::size_t apparent_findings = 0;
  std::size_t apparent_claims = 0;  // distinct predications behind them
  std::size_t contradiction_candidates = 0;
  std::size_t diversity_candidates = 0;
  std::size_t contradictions_curated = 0;
  std::size_t diversity_curated = 0;
  std::size_t apparent_curated = 0;
  std::size_t pending = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t reclassified = 0;

  friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

// `findings` may be raw detector output or a curated set that still lists its
// rejected findings; reclassified diversity findings count as contradiction
// candidates. Corpus and units are optional.
SummaryStats summary(const ClaimCorpus* corpus, const UnitStore* units,
                     const FindingSet& findings);
Report summary_report(const SummaryStats& stats);

std::string render(const Report& report, ReportFormat format);
std::string render_csv(const Report& report);
std::string render_json(const Report& report);
std::string render_md(const Report& report);

}  // namespace knowcert
