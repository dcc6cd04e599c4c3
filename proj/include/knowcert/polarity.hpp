// Excitatory / Inhibitory predicate grouping and the opposite-polarity
// contradiction rule.
#pragma once

#include <filesystem>
#include <istream>
#include <set>
#include <stdexcept>
#include <string_view>

#include "knowcert/corpus.hpp"

namespace knowcert {

enum class Polarity { Excitatory, Inhibitory, Neutral };

std::string_view polarity_name(Polarity p);

class PolarityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invariants (checked by `validate`): the groups are disjoint, and for every
// listed base both P and NEG_P are present, one in each group.
class PolarityTable {
 public:
  PolarityTable() = default;
  PolarityTable(std::set<Predicate> excitatory, std::set<Predicate> inhibitory);

  const std::set<Predicate>& excitatory() const { return excitatory_; }
  const std::set<Predicate>& inhibitory() const { return inhibitory_; }
  std::size_t size() const { return excitatory_.size() + inhibitory_.size(); }

  Polarity polarity(const Predicate& p) const;

 private:
  void validate() const;

  std::set<Predicate> excitatory_;
  std::set<Predicate> inhibitory_;
};

// `PREDICATE<TAB>GROUP` with GROUP in {E, I}; header required.
PolarityTable parse_polarity_table(std::istream& in);
PolarityTable load_polarity_table(const std::filesystem::path& path);

inline Polarity polarity(const Predicate& p, const PolarityTable& t) {
  return t.polarity(p);
}

// True iff one predicate is Excitatory and the other Inhibitory.
bool contradicts(const Predicate& a, const Predicate& b, const PolarityTable& t);

inline Predicate flip(Predicate p) {
  p.negated = !p.negated;
  return p;
}

}  // namespace knowcert
