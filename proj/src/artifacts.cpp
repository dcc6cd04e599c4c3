#include "knowcert/artifacts.hpp"

#include <array>
#include <fstream>

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/map.hpp>
#include <cereal/types/optional.hpp>
#include <cereal/types/set.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>
#include <fmt/format.h>

namespace knowcert {

template <class Archive>
void serialize(Archive& ar, Concept& c) {
  ar(c.cui, c.preferred_name, c.semantic_types);
}
template <class Archive>
void serialize(Archive& ar, Predicate& p) {
  ar(p.base, p.negated);
}
template <class Archive>
void serialize(Archive& ar, PredicationRecord& r) {
  ar(r.predication_id, r.sentence_id, r.article_id, r.subject, r.predicate, r.object);
}
template <class Archive>
void serialize(Archive& ar, SentenceRecord& s) {
  ar(s.sentence_id, s.article_id, s.location, s.ordinal, s.text);
}
template <class Archive>
void serialize(Archive& ar, ArticleMetadata& a) {
  ar(a.article_id, a.pub_year, a.pub_month, a.publication_types, a.mesh_headings);
}
template <class Archive>
void serialize(Archive& ar, QuarantinedPredication& q) {
  ar(q.record, q.reason);
}
template <class Archive>
void serialize(Archive& ar, ClaimCorpus& c) {
  ar(c.predications, c.sentences, c.articles, c.quarantine);
}
template <class Archive>
void serialize(Archive& ar, CueHit& h) {
  ar(h.term, h.offset);
}
template <class Archive>
void serialize(Archive& ar, CueTags& t) {
  ar(t.sentence_id, t.hedge_hits, t.disagreement_hits);
}
template <class Archive>
void serialize(Archive& ar, UnitKey& k) {
  ar(k.subject_cui, k.predicate, k.object_cui);
}
template <class Archive>
void serialize(Archive& ar, Claim& c) {
  ar(c.predication_id, c.sentence_id, c.article_id, c.location, c.pub_year,
     c.pub_month, c.hedged, c.disagreement_cue, c.subject_name, c.object_name);
}
template <class Archive>
void serialize(Archive& ar, KnowledgeUnit& u) {
  ar(u.key, u.claims);
}
template <class Archive>
void serialize(Archive& ar, UnitStore& s) {
  ar(s.corpus_version, s.score_mode, s.hedged_excluded, s.exclusion_mode,
     s.units, s.collapsed);
}

namespace {

constexpr std::array<char, 4> kMagic = {'K', 'N', 'C', 'T'};

std::string_view kind_name(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::corpus: return "corpus";
    case ArtifactKind::tags: return "tags";
    case ArtifactKind::units: return "units";
  }
  return "unknown";
}

template <typename T>
void write_artifact(std::ostream& out, ArtifactKind kind, const T& value) {
  out.write(kMagic.data(), kMagic.size());
  out.put(static_cast<char>(kind));
  out.put(static_cast<char>(kArtifactVersion));
  cereal::PortableBinaryOutputArchive ar(out);
  ar(value);
  if (!out) throw ArtifactError("write failed");
}

template <typename T>
T read_artifact(std::istream& in, ArtifactKind kind) {
  std::array<char, 6> head{};
  if (!in.read(head.data(), head.size()) ||
      !std::equal(kMagic.begin(), kMagic.end(), head.begin())) {
    throw ArtifactError("not a knowcert artifact");
  }
  auto got = static_cast<ArtifactKind>(static_cast<std::uint8_t>(head[4]));
  if (got != kind) {
    throw ArtifactError(fmt::format("expected a {} artifact, found {}",
                                    kind_name(kind), kind_name(got)));
  }
  auto version = static_cast<std::uint8_t>(head[5]);
  if (version != kArtifactVersion) {
    throw ArtifactError(fmt::format("unsupported {} artifact version {} (want {})",
                                    kind_name(kind), version, kArtifactVersion));
  }
  T value;
  try {
    cereal::PortableBinaryInputArchive ar(in);
    ar(value);
  } catch (const cereal::Exception& e) {
    throw ArtifactError(fmt::format("corrupt {} artifact: {}", kind_name(kind), e.what()));
  }
  return value;
}

template <typename T>
void save(const std::filesystem::path& path, ArtifactKind kind, const T& value) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArtifactError(fmt::format("cannot write {}", path.string()));
  write_artifact(out, kind, value);
}

template <typename T>
T load(const std::filesystem::path& path, ArtifactKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError(fmt::format("cannot open {}", path.string()));
  try {
    return read_artifact<T>(in, kind);
  } catch (const ArtifactError& e) {
    throw ArtifactError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace

void write_corpus(std::ostream& out, const ClaimCorpus& corpus) {
  write_artifact(out, ArtifactKind::corpus, corpus);
}
ClaimCorpus read_corpus(std::istream& in) {
  return read_artifact<ClaimCorpus>(in, ArtifactKind::corpus);
}
void write_tags(std::ostream& out, const CueMap& tags) {
  write_artifact(out, ArtifactKind::tags, tags);
}
CueMap read_tags(std::istream& in) { return read_artifact<CueMap>(in, ArtifactKind::tags); }
void write_units(std::ostream& out, const UnitStore& store) {
  write_artifact(out, ArtifactKind::units, store);
}
UnitStore read_units(std::istream& in) {
  return read_artifact<UnitStore>(in, ArtifactKind::units);
}

void save_corpus(const std::filesystem::path& path, const ClaimCorpus& corpus) {
  save(path, ArtifactKind::corpus, corpus);
}
ClaimCorpus load_corpus(const std::filesystem::path& path) {
  return load<ClaimCorpus>(path, ArtifactKind::corpus);
}
void save_tags(const std::filesystem::path& path, const CueMap& tags) {
  save(path, ArtifactKind::tags, tags);
}
CueMap load_tags(const std::filesystem::path& path) {
  return load<CueMap>(path, ArtifactKind::tags);
}
void save_units(const std::filesystem::path& path, const UnitStore& store) {
  save(path, ArtifactKind::units, store);
}
UnitStore load_units(const std::filesystem::path& path) {
  return load<UnitStore>(path, ArtifactKind::units);
}

}  // namespace knowcert
