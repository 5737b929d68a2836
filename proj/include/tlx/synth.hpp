#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tlx {

/// Generator for the bundled "mini-flights" corpus and larger variants.
///
/// Each domain is one route. Half the routes delay on winter weather, the
/// other half on traffic congestion; routes of the same kind share most of
/// their vocabulary.
struct SynthConfig {
  std::size_t domains = 8;
  std::size_t min_lsos = 70;
  std::size_t max_lsos = 80;
  double label_noise = 0.1;
  std::uint64_t seed = 1;
};

struct SynthDomain {
  std::string id;
  char regime = 'W';  // 'W' weather-driven, 'C' congestion-driven
  std::string origin;
  std::string destination;
  std::size_t lsos = 0;
};

struct SynthCorpus {
  std::vector<SynthDomain> domains;  // sorted by id
  // The planted pair; each alone reaches one congestion route, together only the weather routes.
  std::vector<std::string> planted_context;
};

// Writes corpus.manifest, constraints, KB, mapping and one directory per domain.
SynthCorpus write_synthetic_corpus(const std::string& dir, const SynthConfig& cfg);

// AUC table for every ordered pair, higher for pairs of the same regime.
std::string synthetic_auc_csv(const SynthCorpus& corpus, std::uint64_t seed);

}  // namespace tlx
