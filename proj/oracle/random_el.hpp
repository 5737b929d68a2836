#pragma once

#include <random>
#include <vector>

#include "tlx/normalize.hpp"
#include "tlx/ontology.hpp"

namespace tlx::oracle {

// Two instance families keep the chase and the ground reasoner on the same
// semantics: Nominal allows nominals anywhere but only nominal existential
// fillers on the right; Anonymous allows arbitrary existential fillers but no
// nominals in the TBox.
enum class Family { Nominal, Anonymous };

struct RandomSpec {
  Family family = Family::Nominal;
  int concepts = 4;
  int roles = 2;
  int individuals = 6;
  int max_rules = 15;
  int max_abox = 14;
  bool equalities = true;
  bool inequalities = true;
};

NormalizedTBox random_normalized(std::mt19937_64& rng, const RandomSpec& spec);
std::vector<TBoxAxiom> random_tbox(std::mt19937_64& rng, const RandomSpec& spec);
std::vector<ABoxAxiom> random_abox(std::mt19937_64& rng, const RandomSpec& spec);

}  // namespace tlx::oracle
