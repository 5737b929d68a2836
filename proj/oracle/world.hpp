#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tlx/domain.hpp"
#include "tlx/evidence.hpp"
#include "tlx/synth.hpp"
#include "tlx/transfer.hpp"

namespace tlx::oracle {

// A generated corpus, materialized, with a synthetic AUC table instead of
// trained models. The directory is removed on destruction.
struct World {
  std::string dir;
  SynthCorpus info;
  Corpus corpus;
  FtiMatrix fti;
  std::unique_ptr<EvidenceEngine> engine;

  World(const SynthConfig& cfg, std::uint64_t auc_seed, const std::string& tag = "world");
  ~World();
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  std::vector<const LearningDomain*> domain_ptrs() const;
  const LearningDomain& domain(const std::string& id) const;
};

// Up to `count` universe ids held by more than one and fewer than all domains,
// spread evenly over the universe; ascending.
std::vector<std::size_t> spread_universe(const EvidenceEngine& engine, std::size_t count);

std::string scratch_dir(const std::string& tag);

}  // namespace tlx::oracle
