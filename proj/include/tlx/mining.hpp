#pragma once

#include <set>
#include <string>
#include <vector>

#include "tlx/domain.hpp"

namespace tlx {

struct MiningParams {
  double sigma = 0.99;
  int kappa = 2;
  double tau = 0.49;
  int kappa_cap = 2;
};

// The regimes P1..P5 from the evaluation, in increasing strictness.
std::vector<MiningParams> standard_regimes();

struct EffectiveSubset {
  std::vector<Entailment> members;  // sorted, size kappa
  double r_e = 0;
  double r_i = 0;
  double score() const { return r_e + r_i; }
};

struct RootSet {
  std::vector<Entailment> frequent;
  std::vector<EffectiveSubset> effective;
  std::vector<Entailment> root_entailments;
  std::set<std::string> root_individuals;
};

// Both throw DataError on a domain without consistent LSOs.
std::vector<Entailment> frequent_entailments(const LearningDomain& d, double sigma);
// Throws std::invalid_argument when kappa < 1 or kappa > cap.
std::vector<EffectiveSubset> effective_subsets(const LearningDomain& d, int kappa, double tau, int cap = 2);

std::set<std::string> root_individuals(const std::vector<Entailment>& roots);
RootSet mine_roots(const LearningDomain& d, const MiningParams& params);

std::string render_roots(const RootSet& roots);

}  // namespace tlx
