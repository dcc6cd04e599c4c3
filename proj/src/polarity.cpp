#include "knowcert/polarity.hpp"

#include <fstream>

#include <fmt/format.h>

#include "knowcert/text.hpp"

namespace knowcert {

std::string_view polarity_name(Polarity p) {
  switch (p) {
    case Polarity::Excitatory: return "Excitatory";
    case Polarity::Inhibitory: return "Inhibitory";
    case Polarity::Neutral: return "Neutral";
  }
  return "Neutral";
}

PolarityTable::PolarityTable(std::set<Predicate> excitatory,
                             std::set<Predicate> inhibitory)
    : excitatory_(std::move(excitatory)), inhibitory_(std::move(inhibitory)) {
  validate();
}

void PolarityTable::validate() const {
  for (const auto& p : excitatory_) {
    if (inhibitory_.contains(p)) {
      throw PolarityError(fmt::format("{} is listed in both groups", p.raw()));
    }
  }
  auto check_flip = [](const std::set<Predicate>& group,
                       const std::set<Predicate>& other, std::string_view name) {
    for (const auto& p : group) {
      if (!other.contains(flip(p))) {
        throw PolarityError(fmt::format(
            "{} is in group {} but {} is not in the opposite group", p.raw(),
            name, flip(p).raw()));
      }
    }
  };
  check_flip(excitatory_, inhibitory_, "E");
  check_flip(inhibitory_, excitatory_, "I");
}

Polarity PolarityTable::polarity(const Predicate& p) const {
  if (excitatory_.contains(p)) return Polarity::Excitatory;
  if (inhibitory_.contains(p)) return Polarity::Inhibitory;
  return Polarity::Neutral;
}

PolarityTable parse_polarity_table(std::istream& in) {
  std::set<Predicate> e;
  std::set<Predicate> i;
  std::string line;
  size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto cols = text::split(body, '\t');
    if (cols.size() != 2) {
      throw PolarityError(fmt::format("line {}: expected 2 columns", line_no));
    }
    auto name = text::trim(cols[0]);
    auto group = text::trim(cols[1]);
    if (!seen_header) {
      if (name != "PREDICATE" || group != "GROUP") {
        throw PolarityError(
            fmt::format("line {}: expected header PREDICATE<TAB>GROUP", line_no));
      }
      seen_header = true;
      continue;
    }
    Predicate p;
    try {
      p = Predicate::parse(name);
    } catch (const std::invalid_argument& err) {
      throw PolarityError(fmt::format("line {}: {}", line_no, err.what()));
    }
    bool inserted = false;
    if (group == "E") {
      inserted = e.insert(p).second;
    } else if (group == "I") {
      inserted = i.insert(p).second;
    } else {
      throw PolarityError(fmt::format("line {}: group must be E or I", line_no));
    }
    if (!inserted) {
      throw PolarityError(fmt::format("line {}: duplicate {}", line_no, p.raw()));
    }
  }
  if (!seen_header) throw PolarityError("polarity table is empty");
  return PolarityTable(std::move(e), std::move(i));
}

PolarityTable load_polarity_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PolarityError(fmt::format("cannot open {}", path.string()));
  try {
    return parse_polarity_table(in);
  } catch (const PolarityError& e) {
    throw PolarityError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

bool contradicts(const Predicate& a, const Predicate& b, const PolarityTable& t) {
  auto pa = t.polarity(a);
  auto pb = t.polarity(b);
  return (pa == Polarity::Excitatory && pb == Polarity::Inhibitory) ||
         (pa == Polarity::Inhibitory && pb == Polarity::Excitatory);
}

}  // namespace knowcert
