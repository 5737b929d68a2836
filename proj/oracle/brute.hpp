#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "tlx/domain.hpp"
#include "tlx/evidence.hpp"

namespace tlx::oracle {

// Fraction of (positive, negative) pairs ranked correctly, ties counting half.
double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels);

// Pearson coefficient from all pairwise differences; no centering.
double pairwise_pearson(const std::vector<double>& x, const std::vector<double>& y);

// Two-tailed p-value by composite Simpson integration of the Student-t density.
double integrated_p_value(double r, std::size_t n);

struct ScoredSubset {
  std::vector<Entailment> members;
  double r_e = 0;
  double r_i = 0;
};

// All size-kappa subsets of the consistent-LSO universe (target excluded)
// scoring at least tau, in lexicographic order of members.
std::vector<ScoredSubset> all_effective_subsets(const LearningDomain& d, int kappa, double tau);

struct ContextStats {
  double gamma = 0;
  double rho = 1;
  std::size_t n = 0;
  bool valid = false;
};

// Evaluates every subset of `universe` with 2..max_dim members directly.
std::map<std::vector<std::size_t>, ContextStats> all_contexts(const EvidenceEngine& engine,
                                                              const std::vector<std::size_t>& universe,
                                                              std::size_t max_dim);

}  // namespace tlx::oracle
