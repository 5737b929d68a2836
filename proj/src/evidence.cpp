#include "tlx/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tlx/ontology.hpp"
#include "tlx/stats.hpp"

namespace tlx {

namespace {

bool has_fresh_name(const Entailment& g) {
  return is_fresh_name(g.predicate) || is_fresh_name(g.subject) || is_fresh_name(g.object);
}

}  // namespace

ChangeRates change_rates(std::size_t size_a, std::size_t size_b, std::size_t n_new, std::size_t n_obs,
                         std::size_t n_inv, std::size_t size_union) {
  if (size_a == 0 && size_b == 0) throw std::invalid_argument("change_rates: both entailment sets are empty");
  if (size_b == 0) throw std::invalid_argument("change_rates: target entailment set is empty");
  if (size_a == 0) throw std::invalid_argument("change_rates: source entailment set is empty");
  if (size_union == 0) throw std::invalid_argument("change_rates: union is empty");
  ChangeRates r;
  r.d_new = static_cast<double>(n_new) / static_cast<double>(size_b);
  r.d_obs = static_cast<double>(n_obs) / static_cast<double>(size_a);
  r.d_inv = static_cast<double>(n_inv) / static_cast<double>(size_union);
  return r;
}

ChangeRates change_rates(const std::vector<Entailment>& ga, const std::vector<Entailment>& gb) {
  std::size_t shared = 0;
  auto i = ga.begin();
  auto j = gb.begin();
  while (i != ga.end() && j != gb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return change_rates(ga.size(), gb.size(), gb.size() - shared, ga.size() - shared, shared,
                      ga.size() + gb.size() - shared);
}

int dec(const std::vector<Entailment>& gs, const std::vector<Entailment>& ga, const std::vector<Entailment>& gb) {
  if (!std::includes(ga.begin(), ga.end(), gs.begin(), gs.end()))
    throw std::invalid_argument("evidence not entailed by source");
  return std::includes(gb.begin(), gb.end(), gs.begin(), gs.end()) ? 1 : 0;
}

Evidence Evidence::context(std::vector<Entailment> gs) {
  std::sort(gs.begin(), gs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  if (gs.size() < 2) throw std::invalid_argument("a core context needs at least two distinct entailments");
  return {Kind::Context, std::move(gs)};
}

std::string Evidence::kind_name() const {
  switch (kind) {
    case Kind::New: return "general";
    case Kind::Obs: return "general";
    case Kind::Inv: return "general";
    case Kind::Narrator: return "narrator";
    case Kind::Context: return "context";
  }
  return "?";
}

std::string Evidence::to_string() const {
  switch (kind) {
    case Kind::New: return "d_new";
    case Kind::Obs: return "d_obs";
    case Kind::Inv: return "d_inv";
    case Kind::Narrator: return entailments.empty() ? std::string{} : entailments.front().to_string();
    case Kind::Context: break;
  }
  std::string out = "{";
  for (std::size_t i = 0; i < entailments.size(); ++i) {
    if (i) out += ", ";
    out += entailments[i].to_string();
  }
  return out + "}";
}

bool is_valid(double gamma, double rho, std::size_t n, const EvidenceConfig& cfg) {
  return std::fabs(gamma) >= cfg.epsilon && rho <= cfg.alpha && n >= cfg.n_min;
}

EvidenceEngine::EvidenceEngine(std::vector<const LearningDomain*> domains, const FtiMatrix& fti, EvidenceConfig cfg)
    : domains_(std::move(domains)), cfg_(cfg) {
  std::sort(domains_.begin(), domains_.end(),
            [](const LearningDomain* a, const LearningDomain* b) { return a->id < b->id; });
  for (std::size_t i = 0; i < domains_.size(); ++i)
    for (std::size_t j = 0; j < domains_.size(); ++j) {
      if (i == j) continue;
      if (const auto* rec = fti.find(domains_[i]->id, domains_[j]->id)) {
        pairs_.emplace_back(i, j);
        pair_fti_.push_back(rec->fti);
      }
    }

  for (const auto* d : domains_) universe_.insert(universe_.end(), d->domain_closure.begin(), d->domain_closure.end());
  std::sort(universe_.begin(), universe_.end());
  universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());
  std::erase_if(universe_, [&](const Entailment& g) {
    if (has_fresh_name(g)) return true;
    return std::any_of(domains_.begin(), domains_.end(), [&](const LearningDomain* d) { return d->target == g; });
  });

  membership_.assign(universe_.size(), DomainSet(domains_.size()));
  for (std::size_t k = 0; k < domains_.size(); ++k) {
    const auto& closure = domains_[k]->domain_closure;
    // both lists are sorted: one merge walk per domain
    auto it = closure.begin();
    for (std::size_t u = 0; u < universe_.size() && it != closure.end(); ++u) {
      it = std::lower_bound(it, closure.end(), universe_[u]);
      if (it != closure.end() && *it == universe_[u]) membership_[u].set(k);
    }
  }
}

std::optional<std::size_t> EvidenceEngine::id_of(const Entailment& g) const {
  auto it = std::lower_bound(universe_.begin(), universe_.end(), g);
  if (it == universe_.end() || !(*it == g)) return std::nullopt;
  return static_cast<std::size_t>(it - universe_.begin());
}

DomainSet EvidenceEngine::evidence_domains(const std::vector<std::size_t>& ids) const {
  DomainSet out(domains_.size());
  out.set();
  for (auto id : ids) out &= membership_.at(id);
  return out;
}

DomainSet EvidenceEngine::evidence_domains(const Evidence& x) const {
  if (x.is_general()) {
    DomainSet all(domains_.size());
    all.set();
    return all;
  }
  DomainSet out(domains_.size());
  out.set();
  for (const auto& g : x.entailments) {
    auto id = id_of(g);
    if (!id) return DomainSet(domains_.size());  // entailed nowhere in the candidate universe
    out &= membership_[*id];
  }
  return out;
}

EvidenceEngine::Embedding EvidenceEngine::embed_domains(const DomainSet& dx) const {
  Embedding e;
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    auto [i, j] = pairs_[p];
    if (!dx.test(i)) continue;
    e.fe.push_back(dx.test(j) ? 1.0 : 0.0);
    e.ft.push_back(pair_fti_[p]);
  }
  return e;
}

EvidenceEngine::Embedding EvidenceEngine::embed(const Evidence& x) const {
  if (!x.is_general()) return embed_domains(evidence_domains(x));
  Embedding e;
  e.fe.reserve(pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    auto [i, j] = pairs_[p];
    auto r = change_rates(domains_[i]->domain_closure, domains_[j]->domain_closure);
    e.fe.push_back(x.kind == Evidence::Kind::New ? r.d_new : x.kind == Evidence::Kind::Obs ? r.d_obs : r.d_inv);
    e.ft.push_back(pair_fti_[p]);
  }
  return e;
}

EvidenceResult EvidenceEngine::finish(const Evidence& x, const Embedding& e, bool no_domains) const {
  EvidenceResult res;
  res.evidence = x;
  res.n = e.fe.size();
  if (no_domains) {
    res.reason = "no evidence domains";
  } else if (res.n < cfg_.n_min || res.n < 3) {
    res.reason = "insufficient samples";
  } else {
    try {
      res.gamma = pearson(e.fe, e.ft);
      res.rho = p_value(res.gamma, res.n);
    } catch (const std::domain_error&) {
      res.reason = "zero variance";
    }
  }
  if (!res.reason.empty()) {
    res.gamma = 0;
    res.rho = 1;
  }
  res.valid = res.reason.empty() && is_valid(res.gamma, res.rho, res.n, cfg_);
  return res;
}

EvidenceResult EvidenceEngine::evaluate_domains(const Evidence& x, const DomainSet& dx) const {
  return finish(x, embed_domains(dx), dx.none());
}

EvidenceResult EvidenceEngine::evaluate(const Evidence& x) const {
  if (x.is_general()) return finish(x, embed(x), false);
  return evaluate_domains(x, evidence_domains(x));
}

std::vector<EvidenceResult> EvidenceEngine::general_factors() const {
  std::vector<EvidenceResult> out;
  std::vector<ChangeRates> rates;
  rates.reserve(pairs_.size());
  for (auto [i, j] : pairs_) rates.push_back(change_rates(domains_[i]->domain_closure, domains_[j]->domain_closure));
  for (auto kind : {Evidence::Kind::New, Evidence::Kind::Obs, Evidence::Kind::Inv}) {
    Embedding e;
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      const auto& r = rates[p];
      e.fe.push_back(kind == Evidence::Kind::New ? r.d_new : kind == Evidence::Kind::Obs ? r.d_obs : r.d_inv);
      e.ft.push_back(pair_fti_[p]);
    }
    out.push_back(finish(Evidence::general(kind), e, false));
  }
  return out;
}

std::vector<EvidenceResult> EvidenceEngine::narrators() const {
  std::vector<EvidenceResult> out;
  out.reserve(universe_.size());
  for (std::size_t u = 0; u < universe_.size(); ++u)
    out.push_back(evaluate_domains(Evidence::narrator(universe_[u]), membership_[u]));
  return out;
}

void sort_by_strength(std::vector<EvidenceResult>& results) {
  std::stable_sort(results.begin(), results.end(), [](const EvidenceResult& a, const EvidenceResult& b) {
    double x = std::fabs(a.gamma), y = std::fabs(b.gamma);
    if (x != y) return x > y;
    return a.evidence.to_string() < b.evidence.to_string();
  });
}

std::string evidence_table(std::vector<EvidenceResult> results) {
  sort_by_strength(results);
  std::ostringstream out;
  out << "kind\tevidence\tgamma\trho\tn\tvalid\n";
  for (const auto& r : results)
    out << r.evidence.kind_name() << '\t' << r.evidence.to_string() << '\t' << format_double(r.gamma) << '\t'
        << format_double(r.rho) << '\t' << r.n << '\t' << (r.valid ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace tlx
