// Uncertainty cue tagging: hedges ("may", "could", "might") and explicit
// disagreement ("conflicting", "controversial", "contradictory").
#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "knowcert/corpus.hpp"

namespace knowcert {

// Entries are lower-case single tokens.
struct CueLexicon {
  std::set<std::string> hedges;
  std::set<std::string> disagreement;

  static CueLexicon defaults();
  friend bool operator==(const CueLexicon&, const CueLexicon&) = default;
};

class LexiconError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One term per line with an optional tab-separated class (`hedge` or
// `disagreement`, default `hedge`) and a reserved third `window` column.
// Blank lines and lines starting with '#' are skipped.
CueLexicon parse_lexicon(std::istream& in);
CueLexicon load_lexicon(const std::filesystem::path& path);

struct CueHit {
  std::string term;
  std::size_t offset = 0;  // byte offset into the sentence text

  friend bool operator==(const CueHit&, const CueHit&) = default;
};

struct CueTags {
  std::string sentence_id;
  std::vector<CueHit> hedge_hits;
  std::vector<CueHit> disagreement_hits;

  bool hedged() const { return !hedge_hits.empty(); }
  friend bool operator==(const CueTags&, const CueTags&) = default;
};

using CueMap = std::map<std::string, CueTags>;

// Token characters: ASCII letters and digits, '-', and any byte >= 0x80.
bool is_token_byte(unsigned char c);

// Case-insensitive whole-token matching; hits are reported in text order.
// The returned tags have an empty sentence_id.
CueTags tag_sentence(std::string_view text, const CueLexicon& lex);

bool is_hedged(const SentenceRecord& sentence, const CueLexicon& lex);

// One entry per corpus sentence (titles included).
CueMap tag_corpus(const ClaimCorpus& corpus, const CueLexicon& lex);

}  // namespace knowcert
