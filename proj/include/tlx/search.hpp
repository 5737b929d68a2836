#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "tlx/evidence.hpp"

namespace tlx {

/// Partition of candidate entailment ids by domain-membership signature.
struct SyncClusters {
  std::vector<std::size_t> ids;                   // the clustered universe, ascending
  std::map<std::size_t, std::size_t> cluster_of;  // entailment id -> cluster index
  std::vector<std::vector<std::size_t>> members;  // ascending; members[c][0] is the representative

  std::size_t representative(std::size_t id) const { return members[cluster_of.at(id)].front(); }
  bool same_cluster(std::size_t a, std::size_t b) const { return cluster_of.at(a) == cluster_of.at(b); }
};

SyncClusters sync_clusters(const EvidenceEngine& engine);
SyncClusters sync_clusters(const EvidenceEngine& engine, const std::vector<std::size_t>& universe);

bool early_stop(const EvidenceResult& r, double alpha);

// True iff some member of x shares g's cluster.
bool fast_extend(const std::vector<std::size_t>& x, std::size_t g, const SyncClusters& clusters);

struct SearchConfig {
  std::size_t max_dim = 4;
  bool early_stop = true;
  // Emit every co-member context, not only those over representatives.
  bool expand = true;
  // Restrict candidates to these engine ids (ascending); empty means the whole universe.
  std::vector<std::size_t> universe;
};

struct ContextRecord {
  std::vector<std::size_t> ids;  // ascending engine ids
  EvidenceResult result;
  bool inherited = false;  // copied from the representative context
};

struct SearchStats {
  std::size_t visited = 0;
  std::size_t early_stopped = 0;
  std::size_t fast_extended = 0;
  std::map<std::size_t, std::size_t> emitted_by_dim;
  std::map<std::size_t, std::size_t> valid_by_dim;
};

using ContextSink = std::function<void(const ContextRecord&)>;

/// Depth-first enumeration of core contexts in canonical order over cluster
/// representatives. Throws std::logic_error if an extension ever grows the
/// evidence-domain set.
SearchStats core_context_search(const EvidenceEngine& engine, const SearchConfig& cfg, const ContextSink& sink);

Evidence context_evidence(const EvidenceEngine& engine, const std::vector<std::size_t>& ids);

}  // namespace tlx
