#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "knowcert/findings_io.hpp"
#include "knowcert/reporting.hpp"

using namespace knowcert;
using knowcert::testing::run_fixture;

namespace {

FindingSet merge(const FindingSet& a, const FindingSet& b) {
  FindingSet out = a;
  out.contradictions.insert(out.contradictions.end(), b.contradictions.begin(),
                            b.contradictions.end());
  out.diversity.insert(out.diversity.end(), b.diversity.begin(), b.diversity.end());
  out.apparent.insert(out.apparent.end(), b.apparent.begin(), b.apparent.end());
  return out;
}

}  // namespace

TEST(Reports, ContradictionRow) {
  auto report = contradiction_table(run_fixture("table2").findings);
  ASSERT_EQ(report.rows.size(), 1u);
  const auto& row = report.rows[0];
  EXPECT_EQ(row.value("subject"), "Cotinine");
  EXPECT_EQ(row.value("predicates"), "PREDISPOSES (1) NEG_PREDISPOSES (1)");
  EXPECT_EQ(row.value("object"), "Malignant neoplasm of lung");
  EXPECT_EQ(row.value("state"), "pending");
  EXPECT_EQ(render_md(report),
            "| subject | predicates | object | category | state |\n"
            "| --- | --- | --- | --- | --- |\n"
            "| Cotinine | PREDISPOSES (1) NEG_PREDISPOSES (1) | Malignant neoplasm of lung |  "
            "| pending |\n");
}

TEST(Reports, RejectedFindingsLeftOut) {
  auto findings = run_fixture("table2").findings;
  findings.contradictions[0].status.state = CurationState::rejected;
  EXPECT_TRUE(contradiction_table(findings).rows.empty());
}

TEST(Reports, DiversityHistogram) {
  auto report = diversity_histogram(run_fixture("table3").findings);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_EQ(report.rows[0].value("labels"), "PREVENTS, TREATS");
  EXPECT_EQ(report.rows[0].value("pair_count"), "1");
}

TEST(Reports, ApparentRowForSelenium) {
  auto run = run_fixture("table4");
  auto report = apparent_table(run.findings, &run.filtered);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].value("date"), "2008 Jan");  // oldest first
  const auto& row = report.rows[1];
  EXPECT_EQ(row.value("date"), "2011 Nov");
  EXPECT_EQ(row.value("cue"), "conflicting");
  EXPECT_EQ(row.value("knowledge"), "Selenium-PREVENTS-Malignant neoplasm of lung");
  EXPECT_EQ(row.value("claim").rfind("22073154.ab.1 BACKGROUND: Selenium", 0), 0u);
}

TEST(Reports, EmptyTablesRenderHeaderOnly) {
  auto report = contradiction_table({});
  EXPECT_EQ(render_csv(report),
            "finding_id,subject_cui,subject,predicates,object_cui,object,category,state\n");
  EXPECT_EQ(Json::parse(render_json(report))["rows"], Json::array());
}

TEST(Reports, CsvQuoting) {
  Report r{"x", {{"a", false}, {"b", false}}, {}};
  r.rows.push_back({{{"a", "one, two"}, {"b", "say \"hi\""}}});
  EXPECT_EQ(render_csv(r), "a,b\n\"one, two\",\"say \"\"hi\"\"\"\n");
  r.rows[0].columns[0].second = "pipe | and\nnewline";
  EXPECT_EQ(render_md(r), "| a | b |\n| --- | --- |\n| pipe \\| and newline | say \"hi\" |\n");
}

TEST(Reports, CsvAndJsonAgree) {
  auto run = run_fixture("table4");
  auto report = apparent_table(run.findings, &run.filtered);
  auto json = Json::parse(render_json(report));
  ASSERT_EQ(json["rows"].size(), report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    for (const auto& [name, value] : report.rows[i].columns) {
      EXPECT_EQ(json["rows"][i][name], value);
    }
  }
  // Header plus one line per row; quoted fields hold no line breaks here.
  auto csv = render_csv(report);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')),
            report.rows.size() + 1);
}

TEST(Reports, SummaryCounts) {
  auto t2 = run_fixture("table2");
  auto t3 = run_fixture("table3");
  auto stats = summary(nullptr, nullptr, merge(t2.findings, t3.findings));
  EXPECT_EQ(stats.contradiction_candidates, 1u);
  EXPECT_EQ(stats.diversity_candidates, 1u);
  EXPECT_EQ(stats.pending, 2u);
  EXPECT_EQ(stats.accepted, 0u);

  auto full = summary(&t2.filtered, &t2.units, t2.findings);
  EXPECT_EQ(full.predications, 2u);
  EXPECT_EQ(full.articles, 2u);
  EXPECT_EQ(full.units, 2u);
  EXPECT_EQ(summary_report(full).rows.size(), 17u);
}

TEST(Reports, FormatAndKindNames) {
  EXPECT_EQ(parse_report_format("md"), ReportFormat::md);
  EXPECT_FALSE(parse_report_format("xlsx"));
  EXPECT_EQ(parse_report_kind("diversity"), ReportKind::diversity);
  EXPECT_FALSE(parse_report_kind("everything"));
}
