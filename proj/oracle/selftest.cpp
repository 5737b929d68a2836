#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <set>
#include <string>

#include "brute.hpp"
#include "chase.hpp"
#include "random_el.hpp"
#include "tlx/evidence.hpp"
#include "tlx/mining.hpp"
#include "tlx/reasoner.hpp"
#include "tlx/search.hpp"
#include "tlx/stats.hpp"
#include "tlx/transfer.hpp"
#include "world.hpp"

namespace tlx::oracle {

namespace {

std::string check_change_rates() {
  ChangeRates r = change_rates(25180, 13412, 11419, 23187, 1193, 38592);
  if (r.d_new != 11419.0 / 13412 || r.d_obs != 23187.0 / 25180 || r.d_inv != 1193.0 / 38592)
    return "rates differ from the count ratios";
  return {};
}

std::string check_pearson() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 3 + rng() % 48;
    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = z(rng);
      y[k] = 0.5 * x[k] + z(rng);
    }
    double r = pearson(x, y);
    if (std::abs(r - pairwise_pearson(x, y)) > 1e-6) return "pearson differs at vector " + std::to_string(i);
    if (i % 5 == 0 && std::abs(p_value(r, n) - integrated_p_value(r, n)) > 5e-4)
      return "p-value differs at vector " + std::to_string(i);
  }
  return {};
}

std::string check_auc() {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u;
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 2 + rng() % 40;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = std::round(u(rng) * 10) / 10;  // coarse grid forces ties
      y[k] = int(k % 2);
    }
    if (std::abs(auc(s, y) - pairwise_auc(s, y)) > 1e-12) return "auc differs at vector " + std::to_string(i);
  }
  return {};
}

std::string check_reasoner() {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    RandomSpec spec;
    spec.family = i % 2 ? Family::Nominal : Family::Anonymous;
    auto tbox = random_normalized(rng, spec);
    auto abox = random_abox(rng, spec);
    auto fast = materialize(tbox, abox);
    auto slow = chase(to_axioms(tbox), abox);
    if (fast.inconsistent() != slow.inconsistent) return "consistency differs at instance " + std::to_string(i);
    if (fast.inconsistent()) continue;
    auto atoms = fast.all_atoms();
    if (std::set<Entailment>(atoms.begin(), atoms.end()) != slow.atoms)
      return "closure differs at instance " + std::to_string(i);
  }
  return {};
}

std::string check_fti_signs() {
  for (int a = 0; a < 20; ++a)
    for (int b = 0; b < 20; ++b) {
      double base = 0.5 + a * 0.025, other = 0.5 + b * 0.025;
      if (a == b) continue;
      // hard above base: negative fsi raises FTI; soft above base: positive fgi raises FTI
      double up = fti(base - other, 0, 1, 1);
      if ((other > base) != (up > 0)) return "hard-transfer sign wrong";
      double gain = fti(0, other - base, 1, 1);
      if ((other > base) != (gain > 0)) return "soft-transfer sign wrong";
    }
  return {};
}

std::string check_mining_and_search() {
  SynthConfig sc;
  sc.domains = 6;
  sc.min_lsos = 12;
  sc.max_lsos = 14;
  World w(sc, 3, "selftest");
  for (const auto& d : w.corpus.domains) {
    auto fast = effective_subsets(d, 2, 0.49);
    auto slow = all_effective_subsets(d, 2, 0.49);
    if (fast.size() != slow.size()) return d.id + ": effective subset count differs";
    for (std::size_t i = 0; i < fast.size(); ++i)
      if (fast[i].members != slow[i].members || std::abs(fast[i].r_e - slow[i].r_e) > 1e-12 ||
          std::abs(fast[i].r_i - slow[i].r_i) > 1e-12)
        return d.id + ": effective subset " + std::to_string(i) + " differs";
  }
  SearchConfig cfg;
  cfg.early_stop = false;
  cfg.universe = spread_universe(*w.engine, 8);
  std::map<std::vector<std::size_t>, EvidenceResult> found;
  core_context_search(*w.engine, cfg, [&](const ContextRecord& r) { found[r.ids] = r.result; });
  auto all = all_contexts(*w.engine, cfg.universe, cfg.max_dim);
  if (found.size() != all.size()) return "pruned search emitted " + std::to_string(found.size()) + " of " +
                                         std::to_string(all.size()) + " contexts";
  for (const auto& [ids, s] : all) {
    auto it = found.find(ids);
    if (it == found.end()) return "context missing from pruned search";
    if (it->second.gamma != s.gamma || it->second.rho != s.rho || it->second.valid != s.valid)
      return "context statistics differ";
  }
  return {};
}

}  // namespace

int run_selftest(std::ostream& out) {
  const std::pair<const char*, std::function<std::string()>> checks[] = {
      {"change rates equal the count ratios", check_change_rates},
      {"pearson and p-value match the oracles", check_pearson},
      {"auc matches pairwise counting", check_auc},
      {"reasoner matches the naive chase", check_reasoner},
      {"fti responds to hard and soft transfer with the right sign", check_fti_signs},
      {"mining and pruned search match exhaustive enumeration", check_mining_and_search},
  };
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    std::string err;
    try {
      err = fn();
    } catch (const std::exception& e) {
      err = std::string("exception: ") + e.what();
    }
    if (err.empty()) {
      out << "PASS " << name << '\n';
    } else {
      ++failures;
      out << "FAIL " << name << ": " << err << '\n';
    }
  }
  return failures;
}

}  // namespace tlx::oracle
