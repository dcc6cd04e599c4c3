// Acceptance suite: one PASS/FAIL line per release criterion. Exit status is
// non-zero when any criterion fails.
#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "fixtures.hpp"
#include "knowcert/curation.hpp"
#include "knowcert/findings_io.hpp"
#include "knowcert/reporting.hpp"
#include "oracle.hpp"
#include "synthetic.hpp"

using namespace knowcert;
using namespace knowcert::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed expectations of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 8) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  Outcome outcome(std::string detail) const {
    if (failed_ == 0) return {true, std::move(detail)};
    std::string msg = fmt::format("{} failed check(s): ", failed_);
    for (size_t i = 0; i < failures_.size(); ++i) msg += (i ? "; " : "") + failures_[i];
    return {false, msg};
  }

 private:
  std::vector<std::string> failures_;
  std::size_t failed_ = 0;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::set<std::string> predicate_names(const std::vector<PredicateSupport>& side) {
  std::set<std::string> out;
  for (const auto& s : side) out.insert(s.predicate.raw());
  return out;
}

TsvInputs read_fixture_tsv(const std::string& name) {
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  auto dir = fixture_dir(name);
  return {slurp(dir / "predications.tsv"), slurp(dir / "sentences.tsv"),
          slurp(dir / "articles.tsv")};
}

FindingSet merged(CurationResult r) {
  auto append = [](auto& dst, auto& src) { dst.insert(dst.end(), src.begin(), src.end()); };
  append(r.curated.contradictions, r.rejected.contradictions);
  append(r.curated.diversity, r.rejected.diversity);
  append(r.curated.apparent, r.rejected.apparent);
  return std::move(r.curated);
}

// ---------------------------------------------------------------------------

Outcome table2_fixture() {
  Check c;
  auto t0 = Clock::now();
  auto run = run_fixture("table2");
  double secs = seconds_since(t0);
  const auto& f = run.findings;
  c.expect(f.contradictions.size() == 1,
           fmt::format("{} contradiction findings, expected 1", f.contradictions.size()));
  c.expect(f.diversity.empty(), "unexpected diversity finding");
  if (f.contradictions.size() == 1) {
    const auto& x = f.contradictions.front();
    auto names = display_names(x);
    c.expect(names.subject == "Cotinine", "subject name " + names.subject);
    c.expect(names.object == "Malignant neoplasm of lung", "object name " + names.object);
    c.expect(predicate_names(x.excitatory) == std::set<std::string>{"PREDISPOSES"},
             "excitatory side is not {PREDISPOSES}");
    c.expect(predicate_names(x.inhibitory) == std::set<std::string>{"NEG_PREDISPOSES"},
             "inhibitory side is not {NEG_PREDISPOSES}");
  }
  c.expect(secs < 1.0, fmt::format("runtime {:.3f} s >= 1 s", secs));
  return c.outcome(fmt::format("1 contradiction (Cotinine, Malignant neoplasm of lung), "
                               "{{PREDISPOSES}} vs {{NEG_PREDISPOSES}}, {:.3f} s",
                               secs));
}

Outcome table3_fixture() {
  Check c;
  auto t0 = Clock::now();
  auto run = run_fixture("table3");
  double secs = seconds_since(t0);
  const auto& f = run.findings;
  c.expect(f.contradictions.empty(),
           fmt::format("{} contradiction findings, expected 0", f.contradictions.size()));
  c.expect(f.diversity.size() == 1,
           fmt::format("{} diversity findings, expected 1", f.diversity.size()));
  if (f.diversity.size() == 1) {
    const auto& d = f.diversity.front();
    c.expect(predicate_names(d.labels) == std::set<std::string>{"PREVENTS", "TREATS"},
             "labels are not {PREVENTS, TREATS}");
    c.expect(d.group == Polarity::Inhibitory, "group is not Inhibitory");
  }
  c.expect(secs < 1.0, fmt::format("runtime {:.3f} s >= 1 s", secs));
  return c.outcome(fmt::format(
      "1 diversity finding {{PREVENTS, TREATS}}, group Inhibitory, 0 contradictions, {:.3f} s",
      secs));
}

Outcome topic2_fixture() {
  Check c;
  auto run = run_fixture("topic2");
  const auto& f = run.findings;
  c.expect(f.contradictions.size() == 1,
           fmt::format("{} contradiction findings, expected 1", f.contradictions.size()));
  std::string row;
  if (f.contradictions.size() == 1) {
    std::map<std::string, std::size_t> counts;
    for (const auto* side : {&f.contradictions[0].excitatory, &f.contradictions[0].inhibitory}) {
      for (const auto& s : *side) counts[s.predicate.raw()] = s.claim_count();
    }
    const std::map<std::string, std::size_t> expected = {
        {"NEG_PREVENTS", 3}, {"PREVENTS", 1}, {"PREDISPOSES", 3}, {"AUGMENTS", 2}};
    c.expect(counts == expected, "per-predicate claim counts differ from 3/1/3/2");

    // Table-6 row shape: subject | predicate (n) list | object, Excitatory
    // side first, each side alphabetical.
    auto md = render_md(contradiction_table(f));
    row = "| Beta Carotene | AUGMENTS (2) NEG_PREVENTS (3) PREDISPOSES (3) PREVENTS (1) | "
          "Malignant neoplasm of lung |";
    c.expect(md.find(row) != std::string::npos, "Markdown table lacks row " + row);
  }
  // The Topic-7 shape on the Table-2 fixture.
  auto md2 = render_md(contradiction_table(run_fixture("table2").findings));
  c.expect(md2.find("| Cotinine | PREDISPOSES (1) NEG_PREDISPOSES (1) | Malignant neoplasm "
                    "of lung |") != std::string::npos,
           "Table-2 row shape differs");
  return c.outcome("NEG_PREVENTS=3 PREVENTS=1 PREDISPOSES=3 AUGMENTS=2; row '" + row + "'");
}

Outcome table4_fixture() {
  Check c;
  auto run = run_fixture("table4");
  auto apparent = detect_apparent(run.units.working_units(), run.tags);
  bool found = false;
  for (const auto& a : apparent) {
    if (a.cue == "contradictory" && a.unit_key.subject_cui == "C0004057" &&
        a.unit_key.predicate.raw() == "PREVENTS" && a.unit_key.object_cui == "C0007131" &&
        a.claim.sentence_id == "18187393.ab.1") {
      found = true;
      c.expect(a.claim.subject_name == "Aspirin" &&
                   a.claim.object_name == "Non-Small Cell Lung Carcinoma",
               "unit names differ");
    }
  }
  c.expect(found, "no 'contradictory' finding on Aspirin-PREVENTS-NSCLC (18187393.ab.1)");
  auto table = apparent_table(run.findings, &run.filtered);
  bool dated = false;
  for (const auto& r : table.rows) {
    if (r.value("sentence_id") == "18187393.ab.1") {
      dated = r.value("date") == "2008 Jan" &&
              r.value("knowledge") == "Aspirin-PREVENTS-Non-Small Cell Lung Carcinoma" &&
              r.value("cue") == "contradictory";
    }
  }
  c.expect(dated, "apparent_table row is not '2008 Jan | ... | Aspirin-PREVENTS-Non-Small "
                  "Cell Lung Carcinoma | contradictory'");
  return c.outcome("cue 'contradictory' on Aspirin-PREVENTS-Non-Small Cell Lung Carcinoma, "
                   "dated 2008 Jan");
}

Outcome polarity_suite() {
  Check c;
  const auto& table = default_config().polarity;
  // Group membership transcribed from the published predicate table.
  const std::vector<std::string> e = {"AUGMENTS",     "CAUSES",       "COMPLICATES",
                                      "PREDISPOSES",  "PRODUCES",     "STIMULATES",
                                      "NEG_DISRUPTS", "NEG_INHIBITS", "NEG_PREVENTS",
                                      "NEG_TREATS"};
  const std::vector<std::string> i = {"DISRUPTS",        "INHIBITS",       "PREVENTS",
                                      "TREATS",          "NEG_AUGMENTS",   "NEG_CAUSES",
                                      "NEG_COMPLICATES", "NEG_PREDISPOSES", "NEG_PRODUCES",
                                      "NEG_STIMULATES"};
  int memberships = 0;
  for (const auto& n : e) {
    memberships += table.polarity(Predicate::parse(n)) == Polarity::Excitatory;
  }
  for (const auto& n : i) {
    memberships += table.polarity(Predicate::parse(n)) == Polarity::Inhibitory;
  }
  c.expect(memberships == 20, fmt::format("{} of 20 memberships hold", memberships));
  c.expect(table.size() == 20, fmt::format("table lists {} predicates", table.size()));

  std::vector<Predicate> inventory;
  for (const auto& n : e) inventory.push_back(Predicate::parse(n));
  for (const auto& n : i) inventory.push_back(Predicate::parse(n));
  for (const auto& n : neutral_names()) inventory.push_back(Predicate::parse(n));
  std::mt19937_64 rng(20240601);
  const std::vector<std::string> bases = {"TREATS", "CAUSES", "PREVENTS", "ISA", "AUGMENTS",
                                          "INTERACTS_WITH", "PART_OF", "USES", "DIAGNOSES"};
  for (int k = 0; k < 1000; ++k) {
    Predicate p;
    if (k % 2 == 0) {
      p.base = bases[rng() % bases.size()];
    } else {
      std::string s;
      std::size_t len = 1 + rng() % 12;
      for (std::size_t j = 0; j < len; ++j) s += "ABCDEFGHIJKLMNOPQRSTUVWXYZ_"[rng() % 27];
      if (s.rfind("NEG_", 0) == 0) s = "X" + s;
      p.base = s;
    }
    p.negated = rng() % 2;
    inventory.push_back(p);
  }

  auto opposite = [](Polarity p) {
    return p == Polarity::Excitatory   ? Polarity::Inhibitory
           : p == Polarity::Inhibitory ? Polarity::Excitatory
                                       : Polarity::Neutral;
  };
  std::size_t pairs = 0;
  for (const auto& a : inventory) {
    c.expect(table.polarity(flip(a)) == opposite(table.polarity(a)),
             "flip-antisymmetry fails for " + a.raw());
    c.expect(flip(flip(a)) == a, "flip is not an involution for " + a.raw());
    c.expect(!contradicts(a, a, table), "irreflexivity fails for " + a.raw());
    for (const auto& b : inventory) {
      ++pairs;
      bool ab = contradicts(a, b, table);
      if (ab != contradicts(b, a, table)) {
        c.expect(false, "symmetry fails for " + a.raw() + "/" + b.raw());
      }
      if (ab && (table.polarity(a) == Polarity::Neutral ||
                 table.polarity(b) == Polarity::Neutral)) {
        c.expect(false, "Neutral-absorption fails for " + a.raw() + "/" + b.raw());
      }
    }
  }
  return c.outcome(fmt::format(
      "20/20 memberships; flip, symmetry, irreflexivity, Neutral-absorption over {} "
      "predicates ({} pairs)",
      inventory.size(), pairs));
}

Outcome oracle_equivalence() {
  Check c;
  auto t0 = Clock::now();
  std::mt19937_64 rng(7);
  std::size_t total_preds = 0, contradictions = 0, diversity = 0, apparent = 0;
  for (int trial = 0; trial < 200; ++trial) {
    SyntheticSpec spec;
    spec.predications = std::uniform_int_distribution<std::size_t>(1, 500)(rng);
    spec.subjects = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    spec.objects = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    spec.hedged_fraction = std::uniform_real_distribution<double>(0.10, 0.40)(rng);
    auto corpus = random_corpus(rng, spec);
    total_preds += corpus.predications.size();

    DetectorOptions opts;
    opts.min_claims = trial % 5 == 4 ? 2 : 1;
    opts.drop_cue_claims = trial % 7 == 6;
    auto run = run_pipeline(corpus.link(), default_config(), test_unit_options(), opts);

    OracleOptions oo;
    oo.min_claims = opts.min_claims;
    oo.drop_cue_claims = opts.drop_cue_claims;
    auto expected = oracle_detect(corpus, oo);
    auto got = project(run.findings);
    c.expect(got.contradictions == expected.contradictions,
             fmt::format("trial {}: contradictions differ from oracle", trial));
    c.expect(got.diversity == expected.diversity,
             fmt::format("trial {}: diversity differs from oracle", trial));
    c.expect(got.apparent == expected.apparent,
             fmt::format("trial {}: apparent findings differ from oracle", trial));

    auto no_hedged = [&](const Claim& cl) {
      return !cl.hedged && !corpus.hedged_sentences.contains(cl.sentence_id);
    };
    bool clean = true;
    for (const auto& f : run.findings.contradictions) {
      for (const auto* side : {&f.excitatory, &f.inhibitory}) {
        for (const auto& s : *side) clean &= std::all_of(s.claims.begin(), s.claims.end(), no_hedged);
      }
    }
    for (const auto& f : run.findings.diversity) {
      for (const auto& s : f.labels) clean &= std::all_of(s.claims.begin(), s.claims.end(), no_hedged);
    }
    for (const auto& f : run.findings.apparent) clean &= no_hedged(f.claim);
    c.expect(clean, fmt::format("trial {}: hedged claim in a finding", trial));

    std::set<PairKey> contra_pairs;
    for (const auto& f : run.findings.contradictions) contra_pairs.insert(f.pair);
    for (const auto& f : run.findings.diversity) {
      c.expect(!contra_pairs.contains(f.pair),
               fmt::format("trial {}: pair both contradictory and diverse", trial));
    }
    contradictions += run.findings.contradictions.size();
    diversity += run.findings.diversity.size();
    apparent += run.findings.apparent.size();
  }
  double secs = seconds_since(t0);
  c.expect(secs < 60.0, fmt::format("runtime {:.1f} s >= 60 s", secs));
  return c.outcome(fmt::format(
      "200 corpora, {} predications; {} contradictions, {} diversity, {} apparent findings "
      "match the oracle; no hedged evidence; exclusive; {:.1f} s",
      total_preds, contradictions, diversity, apparent, secs));
}

ClaimCorpus hedge_corpus(const std::string& treat_sentence) {
  std::vector<PredicationRecord> preds;
  Concept x{"C0000101", "X", {"phsu"}}, y{"C0000202", "Y", {"dsyn"}};
  preds.push_back({"H1", "900001.ab.1", "900001", x, Predicate::parse("TREATS"), y});
  preds.push_back({"H2", "900001.ab.2", "900001", x, Predicate::parse("PREVENTS"), y});
  std::vector<SentenceRecord> sents = {
      {"900001.ab.1", "900001", SentenceLocation::abstract, 1, treat_sentence},
      {"900001.ab.2", "900001", SentenceLocation::abstract, 2, "X prevented Y in the trial."}};
  ArticleMetadata art;
  art.article_id = "900001";
  art.pub_year = 2010;
  art.publication_types = {"Randomized Controlled Trial"};
  return link(preds, sents, {art}, true);
}

bool cites_sentence(const FindingSet& f, const std::string& sid) {
  auto in_side = [&](const std::vector<PredicateSupport>& side) {
    for (const auto& s : side) {
      for (const auto& c : s.claims) {
        if (c.sentence_id == sid) return true;
      }
    }
    return false;
  };
  for (const auto& x : f.contradictions) {
    if (in_side(x.excitatory) || in_side(x.inhibitory)) return true;
  }
  for (const auto& x : f.diversity) {
    if (in_side(x.labels)) return true;
  }
  for (const auto& x : f.apparent) {
    if (x.claim.sentence_id == sid) return true;
  }
  return false;
}

Outcome hedging_filter() {
  Check c;
  auto hedged = run_pipeline(hedge_corpus("X may treat Y"), default_config(), test_unit_options());
  c.expect(!cites_sentence(hedged.findings, "900001.ab.1"),
           "hedged 'X may treat Y' claim appears in a finding");
  c.expect(hedged.findings.size() == 0, "findings remain without the TREATS claim");
  auto plain = run_pipeline(hedge_corpus("X treat Y"), default_config(), test_unit_options());
  c.expect(cites_sentence(plain.findings, "900001.ab.1"),
           "'X treat Y' claim is not re-admitted");
  c.expect(plain.findings.diversity.size() == 1,
           "re-admitted claim does not form the {PREVENTS, TREATS} diversity finding");
  return c.outcome("'X may treat Y' excluded from all findings; 'X treat Y' re-admitted");
}

// Decision-filtered re-detection: the curated pair findings must equal the
// detectors re-run on the unit map minus every claim removed by an effective
// partial decision, minus pairs invalidated outright.
void check_redetection(Check& c, const std::string& label, const FindingSet& findings,
                       const UnitMap& units, const std::vector<CurationDecision>& log,
                       const CurationResult& result, const DetectorOptions& opts) {
  // Independent last-write-wins: stable sort by timestamp, take the last.
  std::map<std::string, const CurationDecision*> effective;
  std::vector<const CurationDecision*> ordered;
  for (const auto& d : log) ordered.push_back(&d);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](auto* a, auto* b) { return a->timestamp < b->timestamp; });
  for (auto* d : ordered) effective[d->finding_id] = d;

  // Partial invalidations are scoped to pair findings; a decision on an
  // apparent finding only ever settles that finding.
  std::set<std::string> pair_ids;
  for (const auto& f : findings.contradictions) pair_ids.insert(f.id);
  for (const auto& f : findings.diversity) pair_ids.insert(f.id);
  std::set<std::string> removed, whole;
  for (const auto& [id, d] : effective) {
    if (d->verdict == Verdict::valid || !pair_ids.contains(id)) continue;
    if (d->verdict == Verdict::out_of_scope || d->affected_claims.empty()) {
      whole.insert(id);
    } else {
      removed.insert(d->affected_claims.begin(), d->affected_claims.end());
    }
  }
  UnitMap filtered;
  for (const auto& [key, unit] : units) {
    KnowledgeUnit u{key, {}};
    for (const auto& cl : unit.claims) {
      if (!removed.contains(cl.predication_id)) u.claims.push_back(cl);
    }
    if (!u.claims.empty()) filtered.emplace(key, std::move(u));
  }
  const auto& polarity = default_config().polarity;
  auto contra = detect_contradictions(filtered, polarity, opts);
  auto div = detect_diversity(filtered, polarity, opts);
  std::erase_if(contra, [&](const auto& f) { return whole.contains(f.id); });
  std::erase_if(div, [&](const auto& f) { return whole.contains(f.id); });

  auto strip = [](auto list) {
    for (auto& f : list) {
      f.status = {};
      f.content_hash.clear();
    }
    return list;
  };
  c.expect(strip(result.curated.contradictions) == strip(contra),
           label + ": curated contradictions differ from re-detection");
  c.expect(strip(result.curated.diversity) == strip(div),
           label + ": curated diversity differs from re-detection");

  std::set<std::string> original_contradictions;
  for (const auto& f : findings.contradictions) original_contradictions.insert(f.id);
  for (const auto& f : result.curated.diversity) {
    bool was_contradiction = original_contradictions.contains(f.id);
    c.expect((f.status.state == CurationState::reclassified) == was_contradiction,
             label + ": reclassified state mismatch on " + f.id);
    c.expect(f.labels.size() >= 2, label + ": diversity finding with < 2 labels");
  }
  std::size_t apparent_expected = 0;
  for (const auto& f : findings.apparent) {
    auto it = effective.find(f.id);
    apparent_expected += it == effective.end() || it->second->verdict == Verdict::valid;
  }
  c.expect(result.curated.apparent.size() == apparent_expected,
           label + ": apparent survivors differ");
}

Outcome curation_replay() {
  Check c;
  std::mt19937_64 rng(99);
  TempDir tmp;
  std::size_t decisions_total = 0, partial = 0, reclassified = 0, trials = 0;
  std::filesystem::path longest_log;
  std::size_t longest = 0;
  FindingSet longest_findings;
  UnitMap longest_units;
  const auto& polarity = default_config().polarity;
  const char* curators[] = {"ann", "bo", "chen"};

  while (decisions_total < 60 || partial < 10) {
    SyntheticSpec spec;
    spec.predications = 300;
    spec.subjects = 4;
    spec.objects = 3;
    auto corpus = random_corpus(rng, spec);
    auto run = run_pipeline(corpus.link(), default_config(), test_unit_options());
    if (run.findings.size() == 0) continue;
    ++trials;
    auto units = run.units.working_units();

    std::vector<std::string> ids;
    for (const auto& f : run.findings.contradictions) ids.push_back(f.id);
    for (const auto& f : run.findings.diversity) ids.push_back(f.id);
    for (const auto& f : run.findings.apparent) ids.push_back(f.id);
    FindingIndex index(run.findings);

    auto log_path = tmp.path() / fmt::format("log{}.jsonl", trials);
    DecisionLog log(log_path);
    std::size_t n = 8 + rng() % 8;
    for (std::size_t k = 0; k < n; ++k) {
      CurationDecision d;
      d.finding_id = ids[rng() % ids.size()];
      d.content_hash = index.content_hash(d.finding_id);
      d.curator = curators[rng() % 3];
      d.timestamp = Timestamp{std::chrono::seconds{1'600'000'000 + (rng() % 5) * 60}};
      d.verdict = static_cast<Verdict>(rng() % 4);
      if (d.verdict == Verdict::ner_error || d.verdict == Verdict::sre_error) {
        auto claims = index.claim_ids(d.finding_id);
        std::shuffle(claims.begin(), claims.end(), rng);
        std::size_t take = rng() % (claims.size() + 1);
        d.affected_claims.assign(claims.begin(), claims.begin() + take);
        if (take > 0) ++partial;
      }
      if (rng() % 3 == 0) d.category_label = fmt::format("Category - {}", 1 + rng() % 7);
      record_decision(log, d, index);
    }
    decisions_total += n;

    auto replayed = DecisionLog::replay(log_path);
    c.expect(replayed.decisions == log.decisions(), "replay differs from the written log");
    auto result = apply_decisions(run.findings, units, replayed.decisions, polarity);
    for (const auto& f : result.curated.diversity) {
      reclassified += f.status.state == CurationState::reclassified;
    }
    check_redetection(c, fmt::format("trial {}", trials), run.findings, units,
                      replayed.decisions, result, {});

    auto once = merged(result);
    auto twice = merged(apply_decisions(once, units, replayed.decisions, polarity));
    c.expect(once == twice, fmt::format("trial {}: apply is not idempotent", trials));

    if (n > longest) {
      longest = n;
      longest_log = log_path;
      longest_findings = run.findings;
      longest_units = units;
    }
  }

  // Truncation at every record boundary, and inside every record.
  std::ifstream in(longest_log, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  auto full = DecisionLog::replay(longest_log).decisions;
  std::vector<std::size_t> boundaries = {0};
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] == '\n') boundaries.push_back(i + 1);
  }
  std::size_t cuts = 0;
  for (std::size_t k = 0; k < boundaries.size(); ++k) {
    for (bool mid : {false, true}) {
      if (mid && k + 1 == boundaries.size()) continue;
      std::size_t len = mid ? (boundaries[k] + boundaries[k + 1]) / 2 : boundaries[k];
      auto cut = tmp.path() / "cut.jsonl";
      std::ofstream(cut, std::ios::binary | std::ios::trunc) << bytes.substr(0, len);
      ++cuts;
      try {
        auto r = DecisionLog::replay(cut);
        std::vector<CurationDecision> prefix(full.begin(), full.begin() + k);
        c.expect(r.decisions == prefix, fmt::format("cut at byte {}: wrong decisions", len));
        auto a = apply_decisions(longest_findings, longest_units, r.decisions, polarity);
        auto b = apply_decisions(longest_findings, longest_units, prefix, polarity);
        c.expect(a.curated == b.curated && a.rejected == b.rejected,
                 fmt::format("cut at byte {}: state differs from prefix", len));
      } catch (const std::exception& e) {
        c.expect(false, fmt::format("cut at byte {}: {}", len, e.what()));
      }
    }
  }

  // Contradiction -> diversity after one sre_error on the sole Excitatory claim.
  {
    Concept folate{"C0016410", "Folic Acid", {"phsu", "vita"}};
    Concept lung{"C0242379", "Malignant neoplasm of lung", {"neop"}};
    std::vector<PredicationRecord> preds = {
        {"R1", "800001.ab.2", "800001", folate, Predicate::parse("PREDISPOSES"), lung},
        {"R2", "800002.ab.4", "800002", folate, Predicate::parse("PREVENTS"), lung},
        {"R3", "800003.ab.6", "800003", folate, Predicate::parse("TREATS"), lung}};
    std::vector<SentenceRecord> sents = {
        {"800001.ab.2", "800001", SentenceLocation::abstract, 2,
         "Folate intake was linked to lung cancer incidence."},
        {"800002.ab.4", "800002", SentenceLocation::abstract, 4,
         "Folate lowered the incidence of lung cancer."},
        {"800003.ab.6", "800003", SentenceLocation::abstract, 6,
         "Folate was given as treatment for lung cancer."}};
    std::vector<ArticleMetadata> arts;
    for (const char* id : {"800001", "800002", "800003"}) {
      ArticleMetadata a;
      a.article_id = id;
      a.pub_year = 2005;
      a.publication_types = {"Meta-Analysis"};
      arts.push_back(a);
    }
    auto run = run_pipeline(link(preds, sents, arts, true), default_config(),
                            test_unit_options());
    c.expect(run.findings.contradictions.size() == 1 && run.findings.diversity.empty(),
             "scenario does not start as one contradiction");
    if (run.findings.contradictions.size() == 1) {
      const auto& f = run.findings.contradictions[0];
      DecisionLog log(tmp.path() / "scenario.jsonl");
      CurationDecision d;
      d.finding_id = f.id;
      d.content_hash = f.content_hash;
      d.verdict = Verdict::sre_error;
      d.affected_claims = {"R1"};
      d.curator = "reviewer";
      d.timestamp = *parse_timestamp("2020-01-01T00:00:00Z");
      record_decision(log, d, FindingIndex(run.findings));
      auto r = apply_decisions(run.findings, run.units.working_units(),
                               DecisionLog::replay(log.path()).decisions, polarity);
      c.expect(r.curated.contradictions.empty(), "contradiction survives the sre_error");
      c.expect(r.curated.diversity.size() == 1, "no diversity finding after the sre_error");
      if (r.curated.diversity.size() == 1) {
        const auto& dv = r.curated.diversity[0];
        c.expect(dv.status.state == CurationState::reclassified, "state is not reclassified");
        c.expect(predicate_names(dv.labels) == std::set<std::string>{"PREVENTS", "TREATS"},
                 "reclassified labels are not {PREVENTS, TREATS}");
        c.expect(dv.group == Polarity::Inhibitory, "reclassified group is not Inhibitory");
        c.expect(dv.id == f.id, "reclassified finding changed id");
        c.expect(detect_contradictions([&] {
                   UnitMap m;
                   for (const auto& s : dv.labels) {
                     UnitKey k{dv.pair.subject_cui, s.predicate, dv.pair.object_cui};
                     m.emplace(k, KnowledgeUnit{k, s.claims});
                   }
                   return m;
                 }(), polarity).empty(),
                 "reclassified labels still contradict");
      }
    }
  }

  return c.outcome(fmt::format(
      "{} decisions over {} corpora ({} partial, {} reclassified) match re-detection; "
      "idempotent; {} truncations replay cleanly; contradiction->diversity scenario holds",
      decisions_total, trials, partial, reclassified, cuts));
}

Outcome determinism() {
  Check c;
  std::mt19937_64 rng(4242);
  std::size_t corpora = 0, permutations = 0, documents = 0;
  std::vector<TsvInputs> inputs;
  for (const char* name : {"table2", "table3", "table4", "topic2"}) {
    inputs.push_back(read_fixture_tsv(name));
  }
  for (int k = 0; k < 20; ++k) {
    SyntheticSpec spec;
    spec.predications = 400;
    spec.subjects = 5;
    spec.objects = 4;
    spec.off_policy_fraction = 0.1;
    spec.duplicate_fraction = 0.15;
    inputs.push_back(to_tsv(random_corpus(rng, spec)));
  }
  for (const auto& in : inputs) {
    ++corpora;
    auto base = render_all(in);
    documents += base.size();
    for (int p = 0; p < 5; ++p) {
      ++permutations;
      auto other = render_all(permute_rows(in, rng));
      for (const auto& [name, bytes] : base) {
        c.expect(other.at(name) == bytes,
                 fmt::format("corpus {} permutation {}: {} differs", corpora, p, name));
      }
    }
  }
  return c.outcome(fmt::format(
      "{} corpora x 5 row permutations: findings.jsonl and {} report files byte-identical",
      corpora, documents / corpora - 1));
}

Outcome scale_smoke() {
  Check c;
  TempDir tmp;
  constexpr std::size_t kPredications = 1'000'000;
  write_large_corpus(tmp.path(), kPredications, 31337);

  auto t0 = Clock::now();
  auto ingested = ingest_files(tmp.path() / "predications.tsv", tmp.path() / "sentences.tsv",
                               tmp.path() / "articles.tsv");
  const auto ingested_count = ingested.corpus.predications.size();
  auto run = run_pipeline(std::move(ingested.corpus), default_config(), test_unit_options());
  double secs = seconds_since(t0);

  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  double peak_gb = static_cast<double>(usage.ru_maxrss) * 1024.0 / 1e9;

  c.expect(ingested_count == kPredications,
           fmt::format("ingested {} predications", ingested_count));
  c.expect(secs < 60.0, fmt::format("ingest + detect took {:.1f} s", secs));
  c.expect(peak_gb < 2.0, fmt::format("peak RSS {:.2f} GB", peak_gb));
  return c.outcome(fmt::format(
      "{} predications -> {} units, {} contradictions, {} diversity, {} apparent; "
      "{:.1f} s, peak RSS {:.2f} GB",
      ingested_count, run.units.units.size(),
      run.findings.contradictions.size(), run.findings.diversity.size(),
      run.findings.apparent.size(), secs, peak_gb));
}

Outcome guarded(const std::function<Outcome()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  // The scale run goes first so its peak RSS is not inflated by earlier work.
  Outcome scale = guarded(scale_smoke);

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Table-2 fixture", table2_fixture},
      {"Table-3 fixture", table3_fixture},
      {"Table-6 Topic-2 fixture", topic2_fixture},
      {"Table-4 row fixture", table4_fixture},
      {"Polarity suite", polarity_suite},
      {"Oracle equivalence", oracle_equivalence},
      {"Hedging filter", hedging_filter},
      {"Curation replay", curation_replay},
      {"Determinism", determinism},
      {"Scale smoke", [&] { return scale; }},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o = guarded(fn);
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed", std::size(criteria) - failed,
                           std::size(criteria))
            << std::endl;
  return failed == 0 ? 0 : 1;
}
