#include "knowcert/reporting.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "knowcert/findings_io.hpp"
#include "knowcert/text.hpp"

namespace knowcert {

namespace {

bool is_rejected(const CurationStatus& s) { return s.state == CurationState::rejected; }

std::vector<std::string> sorted_raw(const std::vector<PredicateSupport>& side) {
  std::vector<std::string> names;
  for (const auto& s : side) names.push_back(s.predicate.raw());
  std::sort(names.begin(), names.end());
  return names;
}

void append_side(std::vector<std::string>& parts,
                 const std::vector<PredicateSupport>& side) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : side) counts[s.predicate.raw()] += s.claim_count();
  for (const auto& [name, n] : counts) parts.push_back(fmt::format("{} ({})", name, n));
}

ReportRow make_row(const std::vector<ReportColumn>& columns,
                   std::vector<std::string> values) {
  ReportRow row;
  for (size_t i = 0; i < columns.size(); ++i) {
    row.columns.emplace_back(columns[i].name, std::move(values[i]));
  }
  return row;
}

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n\r") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string md_cell(const std::string& v) {
  std::string out;
  for (char c : v) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n' || c == '\r') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

const std::string& ReportRow::value(std::string_view name) const {
  for (const auto& [k, v] : columns) {
    if (k == name) return v;
  }
  throw std::out_of_range(fmt::format("no column '{}'", name));
}

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  if (name == "md") return ReportFormat::md;
  return std::nullopt;
}

std::optional<ReportKind> parse_report_kind(std::string_view name) {
  if (name == "contradictions") return ReportKind::contradictions;
  if (name == "diversity") return ReportKind::diversity;
  if (name == "apparent") return ReportKind::apparent;
  if (name == "summary") return ReportKind::summary;
  return std::nullopt;
}

std::string predicate_list(const ContradictionFinding& f) {
  std::vector<std::string> parts;
  append_side(parts, f.excitatory);
  append_side(parts, f.inhibitory);
  return text::join(parts, " ");
}

Report contradiction_table(const FindingSet& findings) {
  Report r;
  r.kind = "contradictions";
  r.columns = {{"finding_id", true},  {"subject_cui", true}, {"subject", false},
               {"predicates", false}, {"object_cui", true},  {"object", false},
               {"category", false},   {"state", false}};
  for (const auto& f : findings.contradictions) {
    if (is_rejected(f.status)) continue;
    auto names = display_names(f);
    r.rows.push_back(make_row(
        r.columns, {f.id, f.pair.subject_cui, names.subject, predicate_list(f),
                    f.pair.object_cui, names.object, f.status.category_label.value_or(""),
                    std::string(state_name(f.status.state))}));
  }
  return r;
}

Report diversity_histogram(const FindingSet& findings) {
  std::map<std::string, std::size_t> counts;
  for (const auto& f : findings.diversity) {
    if (is_rejected(f.status)) continue;
    ++counts[text::join(sorted_raw(f.labels), ", ")];
  }
  std::vector<std::pair<std::string, std::size_t>> ordered(counts.begin(), counts.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;  // map order already breaks ties by label
  });

  Report r;
  r.kind = "diversity";
  r.columns = {{"labels", false}, {"pair_count", false}};
  for (const auto& [labels, n] : ordered) {
    r.rows.push_back(make_row(r.columns, {labels, std::to_string(n)}));
  }
  return r;
}

Report apparent_table(const FindingSet& findings, const ClaimCorpus* corpus) {
  std::vector<const ApparentFinding*> rows;
  for (const auto& f : findings.apparent) {
    if (!is_rejected(f.status)) rows.push_back(&f);
  }
  auto date_key = [](const ApparentFinding* f) {
    const Claim& c = f->claim;
    return std::make_tuple(!c.pub_year.has_value(), c.pub_year.value_or(0),
                           c.pub_month.value_or(0));
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const auto* a, const auto* b) {
    auto ka = date_key(a), kb = date_key(b);
    return std::tie(ka, a->claim.sentence_id, a->id) <
           std::tie(kb, b->claim.sentence_id, b->id);
  });

  Report r;
  r.kind = "apparent";
  r.columns = {{"finding_id", true}, {"date", false},        {"sentence_id", true},
               {"claim", false},     {"subject_cui", true},  {"predicate", true},
               {"object_cui", true}, {"knowledge", false},   {"cue", false},
               {"state", false}};
  for (const ApparentFinding* f : rows) {
    const Claim& c = f->claim;
    std::string claim = c.sentence_id;
    if (corpus) {
      if (auto it = corpus->sentences.find(c.sentence_id); it != corpus->sentences.end()) {
        claim += ' ';
        claim += it->second.text;
      }
    }
    std::string spo = fmt::format("{}-{}-{}", c.subject_name, f->unit_key.predicate.raw(),
                                  c.object_name);
    r.rows.push_back(make_row(
        r.columns, {f->id, format_pub_date(c.pub_year, c.pub_month), c.sentence_id,
                    std::move(claim), f->unit_key.subject_cui, f->unit_key.predicate.raw(),
                    f->unit_key.object_cui, std::move(spo), f->cue,
                    std::string(state_name(f->status.state))}));
  }
  return r;
}

SummaryStats summary(const ClaimCorpus* corpus, const UnitStore* units,
                     const FindingSet& findings) {
  SummaryStats s;
  if (corpus) {
    s.predications = corpus->predications.size();
    s.sentences = corpus->sentences.size();
    s.articles = corpus->articles.size();
  }
  if (units) {
    s.units = units->units.size();
    for (const auto& [key, unit] : units->units) s.claims += unit.claims.size();
    if (units->hedged_excluded) {
      std::size_t kept = 0;
      for (const auto& [key, unit] : units->working_units()) kept += unit.claims.size();
      s.hedged_claims_filtered = s.claims - kept;
    }
  }

  auto count_state = [&](const CurationStatus& st) {
    switch (st.state) {
      case CurationState::pending: ++s.pending; break;
      case CurationState::accepted: ++s.accepted; break;
      case CurationState::rejected: ++s.rejected; break;
      case CurationState::reclassified: ++s.reclassified; break;
    }
  };
  for (const auto& f : findings.contradictions) {
    ++s.contradiction_candidates;
    if (!is_rejected(f.status)) ++s.contradictions_curated;
    count_state(f.status);
  }
  for (const auto& f : findings.diversity) {
    if (f.status.state == CurationState::reclassified) {
      ++s.contradiction_candidates;
    } else {
      ++s.diversity_candidates;
    }
    if (!is_rejected(f.status)) ++s.diversity_curated;
    count_state(f.status);
  }
  std::set<std::string> apparent_claims;
  for (const auto& f : findings.apparent) {
    ++s.apparent_findings;
    apparent_claims.insert(f.claim.predication_id);
    if (!is_rejected(f.status)) ++s.apparent_curated;
    count_state(f.status);
  }
  s.apparent_claims = apparent_claims.size();
  return s;
}

Report summary_report(const SummaryStats& s) {
  Report r;
  r.kind = "summary";
  r.columns = {{"metric", false}, {"value", false}};
  const std::pair<const char*, std::size_t> metrics[] = {
      {"predications", s.predications},
      {"sentences", s.sentences},
      {"articles", s.articles},
      {"units", s.units},
      {"claims", s.claims},
      {"hedged_claims_filtered", s.hedged_claims_filtered},
      {"apparent_findings", s.apparent_findings},
      {"apparent_claims", s.apparent_claims},
      {"contradiction_candidates", s.contradiction_candidates},
      {"diversity_candidates", s.diversity_candidates},
      {"contradictions_curated", s.contradictions_curated},
      {"diversity_curated", s.diversity_curated},
      {"apparent_curated", s.apparent_curated},
      {"pending", s.pending},
      {"accepted", s.accepted},
      {"rejected", s.rejected},
      {"reclassified", s.reclassified},
  };
  for (const auto& [name, v] : metrics) {
    r.rows.push_back(make_row(r.columns, {name, std::to_string(v)}));
  }
  return r;
}

std::string render_csv(const Report& report) {
  std::string out;
  for (size_t i = 0; i < report.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(report.columns[i].name);
  }
  out += '\n';
  for (const auto& row : report.rows) {
    for (size_t i = 0; i < row.columns.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row.columns[i].second);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Report& report) {
  Json j;
  j["kind"] = report.kind;
  Json cols = Json::array();
  for (const auto& c : report.columns) cols.push_back(c.name);
  j["columns"] = std::move(cols);
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json obj = Json::object();
    for (const auto& [k, v] : row.columns) obj[k] = v;
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + '\n';
}

std::string render_md(const Report& report) {
  std::vector<size_t> shown;
  for (size_t i = 0; i < report.columns.size(); ++i) {
    if (!report.columns[i].machine_only) shown.push_back(i);
  }
  std::string out = "|";
  for (size_t i : shown) out += ' ' + md_cell(report.columns[i].name) + " |";
  out += "\n|";
  for (size_t k = 0; k < shown.size(); ++k) out += " --- |";
  out += '\n';
  for (const auto& row : report.rows) {
    out += '|';
    for (size_t i : shown) out += ' ' + md_cell(row.columns[i].second) + " |";
    out += '\n';
  }
  return out;
}

std::string render(const Report& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv: return render_csv(report);
    case ReportFormat::json: return render_json(report);
    case ReportFormat::md: return render_md(report);
  }
  return {};
}

}  // namespace knowcert
