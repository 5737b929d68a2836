#include "tlx/mining.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <boost/dynamic_bitset.hpp>

namespace tlx {

namespace {

using Bits = boost::dynamic_bitset<>;

constexpr double kSlack = 1e-12;

struct Incidence {
  std::size_t lsos = 0;
  Bits target;                      // LSOs entailing g^t
  std::vector<Entailment> universe;  // G(O) minus g^t, sorted
  std::vector<Bits> has;            // per universe entry
};

Incidence incidence(const LearningDomain& d) {
  if (!d.materialized) throw DataError("domain '" + d.id + "' is not materialized");
  std::vector<const EntailmentClosure*> ok;
  for (const auto& c : d.closures)
    if (!c.inconsistent()) ok.push_back(&c);
  if (ok.empty()) throw DataError("domain '" + d.id + "' has no consistent LSOs");
  Incidence inc;
  inc.lsos = ok.size();
  inc.target.resize(ok.size());
  std::map<Entailment, std::size_t> slot;
  for (std::size_t i = 0; i < ok.size(); ++i) {
    if (ok[i]->entails(d.target)) inc.target.set(i);
    for (const auto& g : ok[i]->atoms()) {
      if (g == d.target) continue;
      auto [it, fresh] = slot.emplace(g, 0);
      if (fresh) it->second = slot.size() - 1;
    }
  }
  std::vector<std::pair<Entailment, std::size_t>> sorted(slot.begin(), slot.end());
  std::vector<std::size_t> remap(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) remap[sorted[i].second] = i;
  inc.universe.reserve(sorted.size());
  for (auto& [g, _] : sorted) inc.universe.push_back(g);
  inc.has.assign(sorted.size(), Bits(ok.size()));
  for (std::size_t i = 0; i < ok.size(); ++i)
    for (const auto& g : ok[i]->atoms()) {
      if (g == d.target) continue;
      inc.has[remap[slot.at(g)]].set(i);
    }
  return inc;
}

}  // namespace

std::vector<MiningParams> standard_regimes() {
  return {{0.90, 1, 0.40, 2}, {0.93, 1, 0.43, 2}, {0.96, 1, 0.46, 2}, {0.99, 1, 0.49, 2}, {0.99, 2, 0.49, 2}};
}

std::vector<Entailment> frequent_entailments(const LearningDomain& d, double sigma) {
  if (!d.materialized) throw DataError("domain '" + d.id + "' is not materialized");
  std::map<Entailment, std::size_t> count;
  std::size_t n = 0;
  for (const auto& c : d.closures) {
    if (c.inconsistent()) continue;
    ++n;
    for (const auto& g : c.atoms()) ++count[g];
  }
  if (n == 0) throw DataError("domain '" + d.id + "' has no consistent LSOs");
  std::vector<Entailment> out;
  for (const auto& [g, k] : count)
    if (static_cast<double>(k) / static_cast<double>(n) >= sigma - kSlack) out.push_back(g);
  return out;
}

std::vector<EffectiveSubset> effective_subsets(const LearningDomain& d, int kappa, double tau, int cap) {
  if (kappa < 1) throw std::invalid_argument("kappa must be at least 1");
  if (kappa > cap)
    throw std::invalid_argument("kappa " + std::to_string(kappa) + " exceeds the configured cap " +
                                std::to_string(cap));
  Incidence inc = incidence(d);
  const double n = static_cast<double>(inc.lsos);
  Bits absent_target = ~inc.target;

  auto score = [&](const std::vector<std::size_t>& members, EffectiveSubset& out) {
    Bits contain = inc.target;
    Bits disjoint = absent_target;
    for (std::size_t m : members) {
      contain &= inc.has[m];
      disjoint &= ~inc.has[m];
    }
    out.r_e = static_cast<double>(contain.count()) / n;
    out.r_i = static_cast<double>(disjoint.count()) / n;
    return out.score() >= tau - kSlack;
  };

  // Level-wise generation. r_e and r_i each only shrink as a set grows, so a
  // k-set can pass only if all of its (k-1)-subsets passed.
  std::vector<std::vector<std::size_t>> level;
  std::vector<EffectiveSubset> scored;
  for (std::size_t i = 0; i < inc.universe.size(); ++i) {
    EffectiveSubset s;
    if (score({i}, s)) {
      level.push_back({i});
      scored.push_back(s);
    }
  }
  for (int k = 2; k <= kappa; ++k) {
    std::set<std::vector<std::size_t>> previous(level.begin(), level.end());
    std::vector<std::vector<std::size_t>> next;
    std::vector<EffectiveSubset> next_scored;
    for (std::size_t a = 0; a < level.size(); ++a) {
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        if (!std::equal(level[a].begin(), level[a].end() - 1, level[b].begin())) break;
        std::vector<std::size_t> cand = level[a];
        cand.push_back(level[b].back());
        bool all_sub = true;
        for (std::size_t drop = 0; drop + 2 < cand.size() && all_sub; ++drop) {
          std::vector<std::size_t> sub = cand;
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
          all_sub = previous.count(sub) > 0;
        }
        if (!all_sub) continue;
        EffectiveSubset s;
        if (score(cand, s)) {
          next.push_back(std::move(cand));
          next_scored.push_back(s);
        }
      }
    }
    level = std::move(next);
    scored = std::move(next_scored);
  }

  std::vector<EffectiveSubset> out;
  for (std::size_t i = 0; i < level.size(); ++i) {
    EffectiveSubset s = scored[i];
    for (std::size_t m : level[i]) s.members.push_back(inc.universe[m]);
    out.push_back(std::move(s));
  }
  return out;
}

std::set<std::string> root_individuals(const std::vector<Entailment>& roots) {
  std::set<std::string> out;
  for (const auto& g : roots) {
    if (!g.subject.empty()) out.insert(g.subject);
    if (g.kind != Entailment::Kind::Class && !g.object.empty()) out.insert(g.object);
  }
  std::erase_if(out, [](const std::string& s) { return is_fresh_name(s); });
  return out;
}

RootSet mine_roots(const LearningDomain& d, const MiningParams& params) {
  RootSet r;
  r.frequent = frequent_entailments(d, params.sigma);
  r.effective = effective_subsets(d, params.kappa, params.tau, params.kappa_cap);
  std::set<Entailment> roots(r.frequent.begin(), r.frequent.end());
  for (const auto& s : r.effective) roots.insert(s.members.begin(), s.members.end());
  r.root_entailments.assign(roots.begin(), roots.end());
  r.root_individuals = root_individuals(r.root_entailments);
  return r;
}

std::string render_roots(const RootSet& roots) {
  std::string out;
  for (const auto& g : roots.root_entailments) out += g.to_string() + "\n";
  return out;
}

}  // namespace tlx
