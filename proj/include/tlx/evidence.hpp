#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "tlx/domain.hpp"
#include "tlx/transfer.hpp"

namespace tlx {

struct ChangeRates {
  double d_new = 0;
  double d_obs = 0;
  double d_inv = 0;
};

// Inputs are sorted, duplicate-free entailment lists. Throws
// std::invalid_argument naming the empty side.
ChangeRates change_rates(const std::vector<Entailment>& ga, const std::vector<Entailment>& gb);
// Same rates from cardinalities alone.
ChangeRates change_rates(std::size_t size_a, std::size_t size_b, std::size_t n_new, std::size_t n_obs,
                         std::size_t n_inv, std::size_t size_union);

// 1 iff gs is contained in gb. Throws std::invalid_argument("evidence not
// entailed by source") when gs is not contained in ga.
int dec(const std::vector<Entailment>& gs, const std::vector<Entailment>& ga, const std::vector<Entailment>& gb);

struct Evidence {
  enum class Kind { New, Obs, Inv, Narrator, Context };
  Kind kind = Kind::New;
  std::vector<Entailment> entailments;  // sorted; empty for general factors

  static Evidence general(Kind k) { return {k, {}}; }
  static Evidence narrator(Entailment g) { return {Kind::Narrator, {std::move(g)}}; }
  static Evidence context(std::vector<Entailment> gs);

  bool is_general() const { return kind == Kind::New || kind == Kind::Obs || kind == Kind::Inv; }
  std::string kind_name() const;
  // "d_obs", "hasOri(d,ORD)" or "{a(x), r(x,y)}".
  std::string to_string() const;
  bool operator==(const Evidence&) const = default;
};

struct EvidenceResult {
  Evidence evidence;
  double gamma = 0;
  double rho = 1;
  std::size_t n = 0;
  bool valid = false;
  std::string reason;  // empty when computable
};

using DomainSet = boost::dynamic_bitset<>;

struct EvidenceConfig {
  double epsilon = 0.1;
  double alpha = 0.05;
  std::size_t n_min = 3;
};

/// Correlative reasoning over a fixed domain list and FTI cache.
///
/// Entailments of the candidate universe are interned; each carries the set
/// of domains whose closure contains it. Ordered pairs without an FTI record
/// are left out.
class EvidenceEngine {
 public:
  EvidenceEngine(std::vector<const LearningDomain*> domains, const FtiMatrix& fti, EvidenceConfig cfg = {});

  const std::vector<const LearningDomain*>& domains() const { return domains_; }
  const EvidenceConfig& config() const { return cfg_; }
  // Union of domain closures minus all targets and fresh names, sorted.
  const std::vector<Entailment>& universe() const { return universe_; }
  std::optional<std::size_t> id_of(const Entailment& g) const;
  const DomainSet& membership(std::size_t id) const { return membership_[id]; }

  DomainSet evidence_domains(const std::vector<std::size_t>& ids) const;
  DomainSet evidence_domains(const Evidence& x) const;

  struct Embedding {
    std::vector<double> fe;
    std::vector<double> ft;
  };
  Embedding embed(const Evidence& x) const;
  // Narrator/context embedding given the evidence domains.
  Embedding embed_domains(const DomainSet& dx) const;

  EvidenceResult evaluate(const Evidence& x) const;
  EvidenceResult evaluate_domains(const Evidence& x, const DomainSet& dx) const;

  // The three general factors followed by one narrator per universe entailment.
  std::vector<EvidenceResult> general_factors() const;
  std::vector<EvidenceResult> narrators() const;

 private:
  EvidenceResult finish(const Evidence& x, const Embedding& e, bool no_domains) const;

  std::vector<const LearningDomain*> domains_;
  EvidenceConfig cfg_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;  // (source, target) indices
  std::vector<double> pair_fti_;
  std::vector<Entailment> universe_;
  std::vector<DomainSet> membership_;
};

// Decision rule for validity given gamma, rho and n.
bool is_valid(double gamma, double rho, std::size_t n, const EvidenceConfig& cfg);

// kind, evidence, gamma, rho, n, valid; sorted by |gamma| descending.
std::string evidence_table(std::vector<EvidenceResult> results);
void sort_by_strength(std::vector<EvidenceResult>& results);

}  // namespace tlx
