#include "knowcert/cue_tagger.hpp"

#include <fstream>

#include <fmt/format.h>

#include "knowcert/text.hpp"

namespace knowcert {

namespace {

void validate_term(const std::string& term, size_t line_no) {
  if (term.empty()) throw LexiconError(fmt::format("line {}: empty term", line_no));
  for (unsigned char c : term) {
    if (!is_token_byte(c)) {
      throw LexiconError(
          fmt::format("line {}: '{}' is not a single token", line_no, term));
    }
    if (c >= 'A' && c <= 'Z') {
      throw LexiconError(
          fmt::format("line {}: '{}' must be lower-case", line_no, term));
    }
  }
}

}  // namespace

CueLexicon CueLexicon::defaults() {
  return {{"may", "could", "might"},
          {"conflicting", "controversial", "contradictory"}};
}

bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '-' || c >= 0x80;
}

CueLexicon parse_lexicon(std::istream& in) {
  CueLexicon lex;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto cols = text::split(body, '\t');
    if (cols.size() > 3) {
      throw LexiconError(fmt::format("line {}: too many columns", line_no));
    }
    std::string term(text::trim(cols[0]));
    validate_term(term, line_no);
    std::string_view cls = cols.size() > 1 ? text::trim(cols[1]) : "";
    if (cols.size() > 2 && !text::trim(cols[2]).empty()) {
      auto window = text::parse_int(cols[2]);
      if (!window || *window < 0) {
        throw LexiconError(fmt::format("line {}: bad window '{}'", line_no,
                                       text::trim(cols[2])));
      }
    }
    if (cls.empty() || cls == "hedge") {
      lex.hedges.insert(term);
    } else if (cls == "disagreement") {
      lex.disagreement.insert(term);
    } else {
      throw LexiconError(fmt::format("line {}: unknown class '{}'", line_no, cls));
    }
  }
  return lex;
}

CueLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError(fmt::format("cannot open {}", path.string()));
  return parse_lexicon(in);
}

CueTags tag_sentence(std::string_view text, const CueLexicon& lex) {
  CueTags tags;
  std::string token;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    if (!is_token_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < n && is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    token = text::to_lower(text.substr(start, i - start));
    if (lex.hedges.contains(token)) tags.hedge_hits.push_back({token, start});
    if (lex.disagreement.contains(token)) {
      tags.disagreement_hits.push_back({token, start});
    }
  }
  return tags;
}

bool is_hedged(const SentenceRecord& sentence, const CueLexicon& lex) {
  return tag_sentence(sentence.text, lex).hedged();
}

CueMap tag_corpus(const ClaimCorpus& corpus, const CueLexicon& lex) {
  CueMap out;
  for (const auto& [id, sentence] : corpus.sentences) {
    auto tags = tag_sentence(sentence.text, lex);
    tags.sentence_id = id;
    out.emplace_hint(out.end(), id, std::move(tags));
  }
  return out;
}

}  // namespace knowcert
