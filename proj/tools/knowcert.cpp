// knowcert: command-line front end for the pipeline stages, curation and
// reporting.
#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "knowcert/artifacts.hpp"
#include "knowcert/curation.hpp"
#include "knowcert/curation_service.hpp"
#include "knowcert/findings_io.hpp"
#include "knowcert/pipeline.hpp"
#include "knowcert/reporting.hpp"
#include "knowcert/text.hpp"

namespace fs = std::filesystem;
using namespace knowcert;

namespace {

const fs::path kDataDir = KNOWCERT_DATA_DIR;

struct DetectFlags {
  std::size_t min_claims = 1;
  bool include_titles = false;
  bool drop_cue_claims = false;

  void add_to(CLI::App* app) {
    app->add_option("--min-claims", min_claims, "Minimum claims per predicate")
        ->check(CLI::PositiveNumber);
    app->add_flag("--include-titles", include_titles, "Count title sentences as evidence");
    app->add_flag("--drop-cue-claims", drop_cue_claims,
                  "Leave disagreement-cue claims out of contradiction/diversity detection");
  }
  DetectorOptions options() const { return {min_claims, !include_titles, drop_cue_claims}; }
};

FindingSet load_findings(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  return read_findings_jsonl(in);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << content;
  if (!out.flush()) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
}

FindingSet merged(CurationResult r) {
  auto append = [](auto& dst, auto& src) {
    std::move(src.begin(), src.end(), std::back_inserter(dst));
  };
  append(r.curated.contradictions, r.rejected.contradictions);
  append(r.curated.diversity, r.rejected.diversity);
  append(r.curated.apparent, r.rejected.apparent);
  return std::move(r.curated);
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("knowcert"));
  spdlog::set_pattern("%^%l%$: %v");

  CLI::App app{"Knowledge objects, contradictions and uncertainty from semantic predications"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse TSV exports into corpus.bin");
  fs::path pred_path, sent_path, art_path, corpus_out;
  bool strict = false;
  ingest_cmd->add_option("--predications", pred_path)->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--sentences", sent_path)->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--articles", art_path)->required()->check(CLI::ExistingFile);
  ingest_cmd->add_flag("--strict", strict, "Malformed rows and dangling references are fatal");
  ingest_cmd->add_option("--out", corpus_out)->required();

  // filter
  auto* filter_cmd = app.add_subcommand("filter", "Keep high-evidence drug-disease predications");
  fs::path filter_in, filter_out;
  fs::path evidence_policy = kDataDir / "evidence_policy.toml";
  fs::path concept_policy = kDataDir / "concept_policy.toml";
  filter_cmd->add_option("--corpus", filter_in)->required()->check(CLI::ExistingFile);
  filter_cmd->add_option("--evidence-policy", evidence_policy, "")->capture_default_str();
  filter_cmd->add_option("--concept-policy", concept_policy, "")->capture_default_str();
  filter_cmd->add_option("--out", filter_out)->required();

  // tag
  auto* tag_cmd = app.add_subcommand("tag", "Tag hedging and disagreement cues");
  fs::path tag_corpus_in, tags_out;
  fs::path lexicon_path = kDataDir / "cue_lexicon.tsv";
  tag_cmd->add_option("--corpus", tag_corpus_in)->required()->check(CLI::ExistingFile);
  tag_cmd->add_option("--lexicon", lexicon_path)->capture_default_str();
  tag_cmd->add_option("--out", tags_out)->required();

  // units
  auto* units_cmd = app.add_subcommand("units", "Aggregate claims into knowledge units");
  fs::path units_corpus, units_tags, units_out;
  std::string exclude_mode = "drop_claims", score_cues = "all";
  UnitOptions unit_options;
  units_cmd->add_option("--corpus", units_corpus)->required()->check(CLI::ExistingFile);
  units_cmd->add_option("--tags", units_tags)->required()->check(CLI::ExistingFile);
  units_cmd->add_flag("--exclude-hedged", unit_options.exclude_hedged,
                      "Keep hedged claims out of detection");
  units_cmd->add_option("--exclude-mode", exclude_mode)
      ->check(CLI::IsMember({"drop_claims", "drop_units_if_empty"}))
      ->capture_default_str();
  units_cmd->add_option("--corpus-version", unit_options.corpus_version,
                        "Part of every knowledge object id")
      ->capture_default_str();
  units_cmd->add_option("--score-cues", score_cues, "Sentences counted as uncertain")
      ->check(CLI::IsMember({"hedge", "all"}))
      ->capture_default_str();
  units_cmd->add_option("--out", units_out)->required();

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "Find contradictions, diversity and apparent disagreement");
  fs::path detect_units, detect_tags, detect_out;
  fs::path polarity_path = kDataDir / "polarity.tsv";
  DetectFlags detect_flags;
  detect_cmd->add_option("--units", detect_units)->required()->check(CLI::ExistingFile);
  detect_cmd->add_option("--tags", detect_tags)->required()->check(CLI::ExistingFile);
  detect_cmd->add_option("--polarity", polarity_path)->capture_default_str();
  detect_flags.add_to(detect_cmd);
  detect_cmd->add_option("--out", detect_out)->required();

  // apply
  auto* apply_cmd = app.add_subcommand("apply", "Apply the curation log to findings");
  fs::path apply_findings, apply_units, apply_log, apply_out;
  DetectFlags apply_flags;
  apply_cmd->add_option("--findings", apply_findings)->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("--units", apply_units)->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("--log", apply_log)->required();
  apply_cmd->add_option("--polarity", polarity_path)->capture_default_str();
  apply_flags.add_to(apply_cmd);
  apply_cmd->add_option("--out", apply_out)->required();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the curation HTTP service");
  fs::path serve_findings, serve_units, serve_corpus, serve_log;
  std::optional<fs::path> static_dir;
  std::string bind = "127.0.0.1:8080";
  DetectFlags serve_flags;
  serve_cmd->add_option("--findings", serve_findings)->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--units", serve_units)->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--corpus", serve_corpus)->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--log", serve_log)->required();
  serve_cmd->add_option("--bind", bind, "HOST:PORT")->capture_default_str();
  serve_cmd->add_option("--polarity", polarity_path)->capture_default_str();
  serve_cmd->add_option("--lexicon", lexicon_path)->capture_default_str();
  serve_cmd->add_option("--static", static_dir, "Directory served at /")
      ->check(CLI::ExistingDirectory);
  serve_flags.add_to(serve_cmd);

  // report
  auto* report_cmd = app.add_subcommand("report", "Export tables and summary statistics");
  fs::path report_findings, report_out;
  std::optional<fs::path> report_corpus, report_units;
  std::string format = "csv", kind;
  report_cmd->add_option("--findings", report_findings)->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--format", format)
      ->check(CLI::IsMember({"csv", "json", "md"}))
      ->capture_default_str();
  report_cmd->add_option("--kind", kind)
      ->required()
      ->check(CLI::IsMember({"contradictions", "diversity", "apparent", "summary"}));
  report_cmd->add_option("--corpus", report_corpus, "Sentence texts and corpus counts")
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--units", report_units, "Unit and claim counts")
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--out", report_out, "Defaults to stdout");

  // show
  auto* show_cmd = app.add_subcommand("show", "Print a knowledge object as JSON");
  std::string show_id;
  fs::path show_units;
  std::optional<fs::path> show_findings;
  show_cmd->add_option("object-id", show_id)->required();
  show_cmd->add_option("--units", show_units)->required()->check(CLI::ExistingFile);
  show_cmd->add_option("--findings", show_findings, "Adds statuses from these findings")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  if (verbose) spdlog::set_level(spdlog::level::debug);

  try {
    if (*ingest_cmd) {
      auto r = ingest_files(pred_path, sent_path, art_path, strict);
      for (const auto& d : r.diagnostics) spdlog::warn("{}", d);
      save_corpus(corpus_out, r.corpus);
      spdlog::info("{} predications, {} sentences, {} articles, {} quarantined",
                   r.corpus.predications.size(), r.corpus.sentences.size(),
                   r.corpus.articles.size(), r.corpus.quarantine.size());
    } else if (*filter_cmd) {
      auto corpus = load_corpus(filter_in);
      auto before = corpus.predications.size();
      auto filtered = filter_corpus(std::move(corpus), load_evidence_policy(evidence_policy),
                                    load_concept_policy(concept_policy));
      save_corpus(filter_out, filtered);
      spdlog::info("kept {} of {} predications", filtered.predications.size(), before);
    } else if (*tag_cmd) {
      auto corpus = load_corpus(tag_corpus_in);
      auto tags = tag_corpus(corpus, load_lexicon(lexicon_path));
      save_tags(tags_out, tags);
      std::size_t hedged = 0;
      for (const auto& [id, t] : tags) hedged += t.hedged();
      spdlog::info("tagged {} sentences, {} hedged", tags.size(), hedged);
    } else if (*units_cmd) {
      unit_options.exclusion_mode = exclude_mode == "drop_units_if_empty"
                                        ? HedgeExclusion::drop_units_if_empty
                                        : HedgeExclusion::drop_claims;
      unit_options.score_mode = *parse_score_mode(score_cues);
      auto store = build_unit_store(load_corpus(units_corpus), load_tags(units_tags),
                                    unit_options);
      save_units(units_out, store);
      spdlog::info("{} units, {} hedged claims, {} duplicate predications collapsed",
                   store.units.size(), store.hedged_claim_count(), store.collapsed.size());
    } else if (*detect_cmd) {
      auto findings = detect(load_units(detect_units), load_polarity_table(polarity_path),
                             load_tags(detect_tags), detect_flags.options());
      write_file(detect_out, findings_jsonl(findings));
      spdlog::info("{} contradictions, {} diversity, {} apparent",
                   findings.contradictions.size(), findings.diversity.size(),
                   findings.apparent.size());
    } else if (*apply_cmd) {
      auto findings = load_findings(apply_findings);
      auto store = load_units(apply_units);
      auto replay = DecisionLog::replay(apply_log);
      for (const auto& w : replay.warnings) spdlog::warn("{}", w);
      auto result = apply_decisions(findings, store.working_units(), replay.decisions,
                                    load_polarity_table(polarity_path), apply_flags.options());
      for (const auto& w : result.warnings) spdlog::warn("{}", w);
      write_file(apply_out, findings_jsonl(merged(std::move(result))));
    } else if (*serve_cmd) {
      auto colon = bind.rfind(':');
      auto port = colon == std::string::npos ? std::nullopt
                                             : text::parse_int(bind.substr(colon + 1));
      if (!port || *port < 0 || *port > 65535) {
        throw std::runtime_error(fmt::format("--bind expects HOST:PORT, got '{}'", bind));
      }
      ServiceData data;
      data.findings = load_findings(serve_findings);
      data.units = load_units(serve_units);
      data.corpus = load_corpus(serve_corpus);
      data.polarity = load_polarity_table(polarity_path);
      data.lexicon = load_lexicon(lexicon_path);
      data.options = serve_flags.options();
      CurationService service(std::move(data), serve_log);
      for (const auto& w : service.replay_warnings()) spdlog::warn("{}", w);
      HttpServer server(service, static_dir);
      int bound = server.bind(bind.substr(0, colon), static_cast<int>(*port));
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      spdlog::info("listening on {}:{}", bind.substr(0, colon), bound);
      server.listen();
      g_server = nullptr;
    } else if (*report_cmd) {
      auto findings = load_findings(report_findings);
      std::optional<ClaimCorpus> corpus;
      std::optional<UnitStore> store;
      if (report_corpus) corpus = load_corpus(*report_corpus);
      if (report_units) store = load_units(*report_units);
      Report report;
      switch (*parse_report_kind(kind)) {
        case ReportKind::contradictions: report = contradiction_table(findings); break;
        case ReportKind::diversity: report = diversity_histogram(findings); break;
        case ReportKind::apparent:
          report = apparent_table(findings, corpus ? &*corpus : nullptr);
          break;
        case ReportKind::summary:
          report = summary_report(
              summary(corpus ? &*corpus : nullptr, store ? &*store : nullptr, findings));
          break;
      }
      auto text = render(report, *parse_report_format(format));
      if (report_out.empty()) {
        std::cout << text;
      } else {
        write_file(report_out, text);
      }
    } else if (*show_cmd) {
      auto store = load_units(show_units);
      auto objects = store.objects();
      if (show_findings) objects = mark_statuses(std::move(objects), load_findings(*show_findings));
      auto it = objects.find(show_id);
      if (it == objects.end()) {
        spdlog::error("no knowledge object {}", show_id);
        return 1;
      }
      std::cout << object_to_json(it->second, timeline(it->second.unit, store.score_mode)).dump(2)
                << '\n';
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
