#pragma once

#include <set>
#include <span>
#include <vector>

#include "tlx/entailment.hpp"
#include "tlx/normalize.hpp"
#include "tlx/ontology.hpp"

namespace tlx::oracle {

struct ChaseResult {
  bool inconsistent = false;
  // Atoms over named individuals only; fresh concept names included.
  std::set<Entailment> atoms;
};

/// Naive apply-until-fixpoint model construction over the un-normalized
/// axioms. Every existential filler gets one shared anonymous witness; only
/// atoms over named individuals are reported. Independent of the rule
/// compiler, the saturation pass and the semi-naive engine.
ChaseResult chase(std::span<const TBoxAxiom> tbox, std::span<const ABoxAxiom> abox);

// Turns normal-form rules back into GCIs so the chase can evaluate them.
std::vector<TBoxAxiom> to_axioms(const NormalizedTBox& tbox);

}  // namespace tlx::oracle
