// Versioned binary snapshots exchanged between pipeline stages
// (corpus.bin, tags.bin, units.bin).
//
// Layout: 4-byte magic "KNCT", 1 kind byte, 1 format-version byte, then a
// portable (little-endian) binary payload.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "knowcert/corpus.hpp"
#include "knowcert/cue_tagger.hpp"
#include "knowcert/knowledge_store.hpp"

namespace knowcert {

enum class ArtifactKind : std::uint8_t { corpus = 1, tags = 2, units = 3 };

inline constexpr std::uint8_t kArtifactVersion = 1;

class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_corpus(std::ostream& out, const ClaimCorpus& corpus);
ClaimCorpus read_corpus(std::istream& in);
void write_tags(std::ostream& out, const CueMap& tags);
CueMap read_tags(std::istream& in);
void write_units(std::ostream& out, const UnitStore& store);
UnitStore read_units(std::istream& in);

void save_corpus(const std::filesystem::path& path, const ClaimCorpus& corpus);
ClaimCorpus load_corpus(const std::filesystem::path& path);
void save_tags(const std::filesystem::path& path, const CueMap& tags);
CueMap load_tags(const std::filesystem::path& path);
void save_units(const std::filesystem::path& path, const UnitStore& store);
UnitStore load_units(const std::filesystem::path& path);

}  // namespace knowcert
