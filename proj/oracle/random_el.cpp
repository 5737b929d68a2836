#include "random_el.hpp"

#include <string>

namespace tlx::oracle {

namespace {

int pick(std::mt19937_64& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

std::string concept_name(int i) { return "A" + std::to_string(i); }
std::string role_name(int i) { return "r" + std::to_string(i); }
std::string ind_name(int i) { return "i" + std::to_string(i); }

BasicConcept basic(std::mt19937_64& rng, const RandomSpec& s, bool allow_nominal, bool allow_bottom) {
  int roll = pick(rng, 20);
  if (roll == 0) return BasicConcept::top();
  if (roll == 1 && allow_bottom) return BasicConcept::bottom();
  if (roll <= 4 && allow_nominal) return BasicConcept::nominal(ind_name(pick(rng, s.individuals)));
  return BasicConcept::atomic(concept_name(pick(rng, s.concepts)));
}

ConceptExpr lhs_expr(std::mt19937_64& rng, const RandomSpec& s, int depth) {
  bool nominals = s.family == Family::Nominal;
  int roll = pick(rng, depth > 0 ? 10 : 6);
  if (roll == 0) return ConceptExpr::top();
  if (roll == 1 && nominals) return ConceptExpr::nominal(ind_name(pick(rng, s.individuals)));
  if (roll <= 5) return ConceptExpr::atomic(concept_name(pick(rng, s.concepts)));
  if (roll <= 7) return ConceptExpr::existential(role_name(pick(rng, s.roles)), lhs_expr(rng, s, depth - 1));
  std::vector<ConceptExpr> ops;
  int n = 2 + pick(rng, 2);
  for (int i = 0; i < n; ++i) ops.push_back(lhs_expr(rng, s, depth - 1));
  return ConceptExpr::conjunction(std::move(ops));
}

ConceptExpr rhs_expr(std::mt19937_64& rng, const RandomSpec& s, int depth) {
  if (s.family == Family::Nominal) {
    int roll = pick(rng, depth > 0 ? 12 : 8);
    if (roll == 0) return ConceptExpr::bottom();
    if (roll == 1) return ConceptExpr::nominal(ind_name(pick(rng, s.individuals)));
    if (roll <= 5) return ConceptExpr::atomic(concept_name(pick(rng, s.concepts)));
    if (roll <= 7)
      return ConceptExpr::existential(role_name(pick(rng, s.roles)),
                                      ConceptExpr::nominal(ind_name(pick(rng, s.individuals))));
    return ConceptExpr::conjunction({rhs_expr(rng, s, depth - 1), rhs_expr(rng, s, depth - 1)});
  }
  int roll = pick(rng, depth > 0 ? 12 : 6);
  if (roll == 0) return ConceptExpr::bottom();
  if (roll <= 5) return ConceptExpr::atomic(concept_name(pick(rng, s.concepts)));
  if (roll <= 9) return ConceptExpr::existential(role_name(pick(rng, s.roles)), rhs_expr(rng, s, depth - 1));
  return ConceptExpr::conjunction({rhs_expr(rng, s, depth - 1), rhs_expr(rng, s, depth - 1)});
}

}  // namespace

NormalizedTBox random_normalized(std::mt19937_64& rng, const RandomSpec& s) {
  NormalizedTBox t;
  bool nominals = s.family == Family::Nominal;
  int n = 1 + pick(rng, s.max_rules);
  for (int i = 0; i < n; ++i) {
    switch (pick(rng, 7)) {
      case 0:
      case 1:
        t.subsumptions.insert({basic(rng, s, nominals, false), basic(rng, s, nominals, true)});
        break;
      case 2:
        t.conjunctions.insert(
            {basic(rng, s, nominals, false), basic(rng, s, nominals, false), basic(rng, s, nominals, true)});
        break;
      case 3:
        t.exists_lhs.insert({role_name(pick(rng, s.roles)), basic(rng, s, nominals, false),
                             basic(rng, s, nominals, true)});
        break;
      case 4: {
        BasicConcept filler = nominals ? BasicConcept::nominal(ind_name(pick(rng, s.individuals)))
                                       : basic(rng, s, false, true);
        t.exists_rhs.insert({basic(rng, s, nominals, false), role_name(pick(rng, s.roles)), filler});
        break;
      }
      case 5:
        t.role_inclusions.insert({role_name(pick(rng, s.roles)), role_name(pick(rng, s.roles))});
        break;
      default:
        t.role_chains.insert(
            {role_name(pick(rng, s.roles)), role_name(pick(rng, s.roles)), role_name(pick(rng, s.roles))});
        break;
    }
  }
  return t;
}

std::vector<TBoxAxiom> random_tbox(std::mt19937_64& rng, const RandomSpec& s) {
  std::vector<TBoxAxiom> out;
  int n = 1 + pick(rng, s.max_rules);
  for (int i = 0; i < n; ++i) {
    int roll = pick(rng, 10);
    if (roll == 0) {
      out.push_back(RoleInclusion{role_name(pick(rng, s.roles)), role_name(pick(rng, s.roles))});
    } else if (roll == 1) {
      out.push_back(
          RoleChain{role_name(pick(rng, s.roles)), role_name(pick(rng, s.roles)), role_name(pick(rng, s.roles))});
    } else {
      out.push_back(Gci{lhs_expr(rng, s, 2), rhs_expr(rng, s, 2)});
    }
  }
  return out;
}

std::vector<ABoxAxiom> random_abox(std::mt19937_64& rng, const RandomSpec& s) {
  std::vector<ABoxAxiom> out;
  int n = 1 + pick(rng, s.max_abox);
  for (int i = 0; i < n; ++i) {
    int roll = pick(rng, 20);
    std::string a = ind_name(pick(rng, s.individuals));
    std::string b = ind_name(pick(rng, s.individuals));
    if (roll < 8) {
      out.push_back(ClassAssertion{ConceptExpr::atomic(concept_name(pick(rng, s.concepts))), a});
    } else if (roll < 16) {
      out.push_back(RoleAssertion{role_name(pick(rng, s.roles)), a, b});
    } else if (roll < 18 && s.equalities) {
      out.push_back(Equality{a, b});
    } else if (roll < 19 && s.inequalities && a != b) {
      out.push_back(Inequality{a, b});
    } else {
      out.push_back(ClassAssertion{ConceptExpr::atomic(concept_name(pick(rng, s.concepts))), a});
    }
  }
  return out;
}

}  // namespace tlx::oracle
