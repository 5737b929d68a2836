#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlx/entailment.hpp"
#include "tlx/normalize.hpp"
#include "tlx/ontology.hpp"

namespace tlx {

namespace detail {
class Engine;
}

struct ReasonerStats {
  std::size_t rounds = 0;       // semi-naive rounds, summed over rebuild epochs
  std::size_t derivations = 0;  // atoms inserted, including re-insertions after a merge
  std::size_t merges = 0;
};

/// Materialized ABox closure of one ontology.
///
/// All atoms are over canonical individuals (the lexicographically least
/// member of each equality class). `atoms()` is the user-visible closure: it
/// omits Top, nominal membership and atoms over normalization names.
class EntailmentClosure {
 public:
  bool inconsistent() const { return inconsistent_; }
  const std::string& inconsistency_witness() const { return witness_; }

  const std::vector<Entailment>& atoms() const { return atoms_; }
  // atoms() plus class atoms over fresh normalization concepts.
  const std::vector<Entailment>& all_atoms() const { return all_atoms_; }

  bool mentions(std::string_view individual) const;
  // Canonical representative; unknown names map to themselves.
  std::string representative(std::string_view individual) const;
  const std::map<std::string, std::string, std::less<>>& representatives() const {
    return representative_;
  }

  bool entails(const Entailment& g) const;

  // One atom per line, sorted.
  std::string dump() const;

  const ReasonerStats& stats() const { return stats_; }

 private:
  friend class Reasoner;
  friend class detail::Engine;

  bool inconsistent_ = false;
  std::string witness_;
  std::vector<Entailment> atoms_;
  std::vector<Entailment> all_atoms_;
  std::map<std::string, std::string, std::less<>> representative_;
  ReasonerStats stats_;
};

/// Ground forward chaining over a normalized TBox.
///
/// Construction indexes the rules and saturates the TBox so that consequences
/// of anonymous successors (A [= some r.B, some r.B [= C) become plain
/// subsumptions A [= C. No anonymous individuals are ever created.
class Reasoner {
 public:
  explicit Reasoner(NormalizedTBox tbox);

  EntailmentClosure materialize(std::span<const ABoxAxiom> abox) const;

  const NormalizedTBox& tbox() const { return tbox_; }
  const std::set<SubsumptionRule>& derived_subsumptions() const { return derived_; }

 private:
  NormalizedTBox tbox_;
  std::set<SubsumptionRule> derived_;
};

// TBox-level subsumers reachable through anonymous successors. Exposed for
// testing; Reasoner applies it on construction.
std::set<SubsumptionRule> saturate_tbox(const NormalizedTBox& tbox);

EntailmentClosure materialize(const NormalizedTBox& tbox, std::span<const ABoxAxiom> abox);

// True iff materializing tbox plus the normalized constraints over abox is
// not inconsistent. Constraints only take part in this check.
bool is_consistent(const NormalizedTBox& tbox, std::span<const ABoxAxiom> abox,
                   std::span<const TBoxAxiom> constraints);

inline bool entails(const EntailmentClosure& closure, const Entailment& g) {
  return closure.entails(g);
}

}  // namespace tlx
