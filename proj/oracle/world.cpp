#include "world.hpp"

#include <atomic>
#include <filesystem>
#include <stdexcept>

#include <unistd.h>

namespace tlx::oracle {

namespace fs = std::filesystem;

std::string scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  fs::path p = fs::temp_directory_path() /
               ("tlx-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

World::World(const SynthConfig& cfg, std::uint64_t auc_seed, const std::string& tag) : dir(scratch_dir(tag)) {
  info = write_synthetic_corpus(dir, cfg);
  corpus = load_corpus(dir);
  materialize_corpus(corpus);
  fti = read_auc_csv(synthetic_auc_csv(info, auc_seed));
  engine = std::make_unique<EvidenceEngine>(domain_ptrs(), fti);
}

World::~World() {
  std::error_code ec;
  fs::remove_all(dir, ec);
}

std::vector<const LearningDomain*> World::domain_ptrs() const {
  std::vector<const LearningDomain*> out;
  for (const auto& d : corpus.domains) out.push_back(&d);
  return out;
}

const LearningDomain& World::domain(const std::string& id) const {
  for (const auto& d : corpus.domains)
    if (d.id == id) return d;
  throw std::out_of_range("no domain " + id);
}

std::vector<std::size_t> spread_universe(const EvidenceEngine& engine, std::size_t count) {
  const std::size_t n = engine.domains().size();
  std::vector<std::size_t> mixed;
  for (std::size_t id = 0; id < engine.universe().size(); ++id) {
    std::size_t c = engine.membership(id).count();
    if (c > 1 && c < n) mixed.push_back(id);
  }
  if (mixed.size() <= count) return mixed;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(mixed[k * mixed.size() / count]);
  return out;
}

}  // namespace tlx::oracle
