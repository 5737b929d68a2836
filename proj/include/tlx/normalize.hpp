#pragma once

#include <compare>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tlx/ontology.hpp"

namespace tlx {

// Operand of a normal-form rule: Top, Bottom, an atomic concept or a nominal.
struct BasicConcept {
  enum class Kind { Top, Bottom, Atomic, Nominal };
  Kind kind = Kind::Top;
  std::string name;

  static BasicConcept top() { return {Kind::Top, {}}; }
  static BasicConcept bottom() { return {Kind::Bottom, {}}; }
  static BasicConcept atomic(std::string n) { return {Kind::Atomic, std::move(n)}; }
  static BasicConcept nominal(std::string n) { return {Kind::Nominal, std::move(n)}; }

  std::string to_string() const;
  auto operator<=>(const BasicConcept&) const = default;
};

// A [= B. A nominal on the right ({b}) is equality-generating.
struct SubsumptionRule {
  BasicConcept sub;
  BasicConcept sup;
  auto operator<=>(const SubsumptionRule&) const = default;
};

// A1 and A2 [= B
struct ConjunctionRule {
  BasicConcept left;
  BasicConcept right;
  BasicConcept sup;
  auto operator<=>(const ConjunctionRule&) const = default;
};

// some r.A [= B
struct ExistentialLhsRule {
  std::string role;
  BasicConcept filler;
  BasicConcept sup;
  auto operator<=>(const ExistentialLhsRule&) const = default;
};

// A [= some r.B
struct ExistentialRhsRule {
  BasicConcept sub;
  std::string role;
  BasicConcept filler;
  auto operator<=>(const ExistentialRhsRule&) const = default;
};

/// Rule-ready TBox. Every rule has depth at most one under its constructor;
/// composite sub-expressions are replaced by fresh "_N<k>" concept names.
struct NormalizedTBox {
  std::set<SubsumptionRule> subsumptions;
  std::set<ConjunctionRule> conjunctions;
  std::set<ExistentialLhsRule> exists_lhs;
  std::set<ExistentialRhsRule> exists_rhs;
  std::set<RoleInclusion> role_inclusions;
  std::set<RoleChain> role_chains;
  std::set<std::string> fresh_concepts;

  std::size_t rule_count() const;
  std::string to_string() const;
  bool operator==(const NormalizedTBox&) const = default;
};

NormalizedTBox normalize_tbox(std::span<const TBoxAxiom> tbox);

// Normalizes more axioms into an existing rule set. Fresh names continue the
// existing counter so the two rule sets never collide.
void extend_normalized(NormalizedTBox& target, std::span<const TBoxAxiom> tbox);

// Returns a basic concept X with X [= expr entailed by the added rules
// (a fresh name when expr is composite). Used for complex class assertions.
BasicConcept add_rhs_definition(NormalizedTBox& target, const ConceptExpr& expr);

}  // namespace tlx
