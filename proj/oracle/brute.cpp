#include "brute.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tlx::oracle {

double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double good = 0, total = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      total += 1;
      if (scores[i] > scores[j]) good += 1;
      else if (scores[i] == scores[j]) good += 0.5;
    }
  }
  if (total == 0) throw std::invalid_argument("need both classes");
  return good / total;
}

double pairwise_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      long double dx = x[i] - x[j], dy = y[i] - y[j];
      sxy += dx * dy;
      sxx += dx * dx;
      syy += dy * dy;
    }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

double integrated_p_value(double r, std::size_t n) {
  const double nu = static_cast<double>(n) - 2;
  const double t = std::fabs(r) * std::sqrt(nu / (1 - r * r));
  const double logc = std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) - 0.5 * std::log(nu * std::numbers::pi);
  auto density = [&](double s) { return std::exp(logc - (nu + 1) / 2 * std::log1p(s * s / nu)); };
  // P(|T| <= t) = 2 * int_0^t f
  const int steps = 200000;
  const double h = t / steps;
  double acc = density(0) + density(t);
  for (int k = 1; k < steps; ++k) acc += density(k * h) * (k % 2 ? 4 : 2);
  double inner = 2 * acc * h / 3;
  return std::max(0.0, 1 - inner);
}

std::vector<ScoredSubset> all_effective_subsets(const LearningDomain& d, int kappa, double tau) {
  std::vector<std::set<Entailment>> closures;
  std::set<Entailment> universe;
  for (const auto& c : d.closures) {
    if (c.inconsistent()) continue;
    auto atoms = c.atoms();
    closures.emplace_back(atoms.begin(), atoms.end());
    universe.insert(atoms.begin(), atoms.end());
  }
  universe.erase(d.target);
  std::vector<Entailment> u(universe.begin(), universe.end());
  const double total = static_cast<double>(closures.size());
  std::vector<ScoredSubset> out;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (pick.size() == static_cast<std::size_t>(kappa)) {
      double all = 0, none = 0;
      for (const auto& c : closures) {
        std::size_t hit = c.count(d.target);
        for (auto p : pick) hit += c.count(u[p]);
        if (hit == pick.size() + 1) all += 1;
        if (hit == 0) none += 1;
      }
      ScoredSubset s{{}, all / total, none / total};
      if (s.r_e + s.r_i >= tau - 1e-12) {
        for (auto p : pick) s.members.push_back(u[p]);
        out.push_back(std::move(s));
      }
      return;
    }
    for (std::size_t i = from; i < u.size(); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::map<std::vector<std::size_t>, ContextStats> all_contexts(const EvidenceEngine& engine,
                                                              const std::vector<std::size_t>& universe,
                                                              std::size_t max_dim) {
  std::map<std::vector<std::size_t>, ContextStats> out;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (pick.size() >= 2) {
      std::vector<Entailment> gs;
      for (auto id : pick) gs.push_back(engine.universe().at(id));
      auto r = engine.evaluate(Evidence::context(gs));
      out[pick] = ContextStats{r.gamma, r.rho, r.n, r.valid};
    }
    if (pick.size() == max_dim) return;
    for (std::size_t i = from; i < universe.size(); ++i) {
      pick.push_back(universe[i]);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace tlx::oracle
