#include "tlx/search.hpp"

#include <algorithm>
#include <stdexcept>

namespace tlx {

SyncClusters sync_clusters(const EvidenceEngine& engine, const std::vector<std::size_t>& universe) {
  SyncClusters out;
  out.ids = universe;
  std::sort(out.ids.begin(), out.ids.end());
  out.ids.erase(std::unique(out.ids.begin(), out.ids.end()), out.ids.end());
  std::map<DomainSet, std::size_t> by_signature;
  for (auto id : out.ids) {
    auto [it, fresh] = by_signature.try_emplace(engine.membership(id), out.members.size());
    if (fresh) out.members.emplace_back();
    out.members[it->second].push_back(id);
    out.cluster_of[id] = it->second;
  }
  return out;
}

SyncClusters sync_clusters(const EvidenceEngine& engine) {
  std::vector<std::size_t> all(engine.universe().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return sync_clusters(engine, all);
}

bool early_stop(const EvidenceResult& r, double alpha) {
  if (r.reason == "insufficient samples" || r.reason == "zero variance") return true;
  return r.rho > alpha;
}

bool fast_extend(const std::vector<std::size_t>& x, std::size_t g, const SyncClusters& clusters) {
  return std::any_of(x.begin(), x.end(), [&](std::size_t g0) { return g0 != g && clusters.same_cluster(g0, g); });
}

Evidence context_evidence(const EvidenceEngine& engine, const std::vector<std::size_t>& ids) {
  std::vector<Entailment> gs;
  gs.reserve(ids.size());
  for (auto id : ids) gs.push_back(engine.universe().at(id));
  return Evidence::context(std::move(gs));
}

namespace {

class Search {
 public:
  Search(const EvidenceEngine& engine, const SearchConfig& cfg, const ContextSink& sink)
      : engine_(engine), cfg_(cfg), sink_(sink) {
    if (cfg.max_dim < 2) throw std::invalid_argument("max_dim must be at least 2");
    clusters_ = cfg.universe.empty() ? sync_clusters(engine) : sync_clusters(engine, cfg.universe);
    for (const auto& m : clusters_.members) reps_.push_back(m.front());
  }

  SearchStats run() {
    const std::size_t n = reps_.size();
    for (std::size_t a = 0; a < n; ++a) {
      if (members(reps_[a]).size() > 1) {
        std::vector<std::size_t> r{reps_[a]};
        auto dx = engine_.membership(reps_[a]);
        ++stats_.visited;
        emit_expansions(r, lookup(dx));
      }
      for (std::size_t b = a + 1; b < n; ++b) {
        std::vector<std::size_t> r{reps_[a], reps_[b]};
        auto dx = engine_.membership(reps_[a]) & engine_.membership(reps_[b]);
        visit(r, dx, b);
      }
    }
    return stats_;
  }

 private:
  struct Cached {
    double gamma, rho;
    std::size_t n;
    bool valid;
    std::string reason;
  };

  const std::vector<std::size_t>& members(std::size_t rep) const {
    return clusters_.members[clusters_.cluster_of.at(rep)];
  }

  const Cached& lookup(const DomainSet& dx) {
    auto it = memo_.find(dx);
    if (it != memo_.end()) return it->second;
    // evidence identity does not enter the statistics
    auto r = engine_.evaluate_domains(Evidence::general(Evidence::Kind::New), dx);
    return memo_.emplace(dx, Cached{r.gamma, r.rho, r.n, r.valid, r.reason}).first->second;
  }

  EvidenceResult materialize(const std::vector<std::size_t>& ids, const Cached& c) const {
    EvidenceResult r;
    r.evidence = context_evidence(engine_, ids);
    r.gamma = c.gamma;
    r.rho = c.rho;
    r.n = c.n;
    r.valid = c.valid;
    r.reason = c.reason;
    return r;
  }

  void record(const std::vector<std::size_t>& ids, const Cached& c, bool inherited) {
    ++stats_.emitted_by_dim[ids.size()];
    if (c.valid) ++stats_.valid_by_dim[ids.size()];
    if (inherited) ++stats_.fast_extended;
    if (sink_) sink_(ContextRecord{ids, materialize(ids, c), inherited});
  }

  // Every context whose cluster set equals that of the representative set r.
  void emit_expansions(const std::vector<std::size_t>& r, const Cached& c) {
    if (!cfg_.expand) {
      count_expansions(r, c);
      return;
    }
    std::vector<std::size_t> y;
    expand_from(r, 0, y, c);
  }

  void expand_from(const std::vector<std::size_t>& r, std::size_t k, std::vector<std::size_t>& y, const Cached& c) {
    if (k == r.size()) {
      if (y.size() < 2) return;
      std::vector<std::size_t> sorted = y;
      std::sort(sorted.begin(), sorted.end());
      if (sorted == r) return;  // emitted directly
      record(sorted, c, true);
      return;
    }
    const auto& m = members(r[k]);
    const std::size_t room = cfg_.max_dim - y.size() - (r.size() - k - 1);
    // nonempty subsets of m of size <= room
    std::vector<std::size_t> pick;
    auto rec = [&](auto&& self, std::size_t from) -> void {
      if (!pick.empty()) {
        std::size_t before = y.size();
        y.insert(y.end(), pick.begin(), pick.end());
        expand_from(r, k + 1, y, c);
        y.resize(before);
      }
      if (pick.size() == room) return;
      for (std::size_t i = from; i < m.size(); ++i) {
        pick.push_back(m[i]);
        self(self, i + 1);
        pick.pop_back();
      }
    };
    rec(rec, 0);
  }

  void count_expansions(const std::vector<std::size_t>& r, const Cached& c) {
    // ways[s]: number of co-member choices of total size s
    std::vector<std::size_t> ways(cfg_.max_dim + 1, 0);
    ways[0] = 1;
    for (auto rep : r) {
      const std::size_t size = members(rep).size();
      std::vector<std::size_t> next(ways.size(), 0);
      for (std::size_t s = 0; s < ways.size(); ++s) {
        if (!ways[s]) continue;
        std::size_t choose = 1;
        for (std::size_t t = 1; t <= size && s + t < ways.size(); ++t) {
          choose = choose * (size - t + 1) / t;
          next[s + t] += ways[s] * choose;
        }
      }
      ways = std::move(next);
    }
    for (std::size_t s = 2; s < ways.size(); ++s) {
      std::size_t extra = ways[s] - (s == r.size() ? 1 : 0);
      if (!extra) continue;
      stats_.fast_extended += extra;
      stats_.emitted_by_dim[s] += extra;
      if (c.valid) stats_.valid_by_dim[s] += extra;
    }
  }

  void visit(std::vector<std::size_t>& r, const DomainSet& dx, std::size_t last) {
    ++stats_.visited;
    const Cached& c = lookup(dx);
    record(r, c, false);
    emit_expansions(r, c);
    if (r.size() >= cfg_.max_dim) return;
    EvidenceResult probe;
    probe.rho = c.rho;
    probe.reason = c.reason;
    if (cfg_.early_stop && early_stop(probe, engine_.config().alpha)) {
      ++stats_.early_stopped;
      return;
    }
    for (std::size_t b = last + 1; b < reps_.size(); ++b) {
      DomainSet next = dx & engine_.membership(reps_[b]);
      if (!next.is_subset_of(dx)) throw std::logic_error("evidence domains grew under extension");
      r.push_back(reps_[b]);
      visit(r, next, b);
      r.pop_back();
    }
  }

  const EvidenceEngine& engine_;
  const SearchConfig& cfg_;
  const ContextSink& sink_;
  SyncClusters clusters_;
  std::vector<std::size_t> reps_;
  std::map<DomainSet, Cached> memo_;
  SearchStats stats_;
};

}  // namespace

SearchStats core_context_search(const EvidenceEngine& engine, const SearchConfig& cfg, const ContextSink& sink) {
  return Search(engine, cfg, sink).run();
}

}  // namespace tlx
