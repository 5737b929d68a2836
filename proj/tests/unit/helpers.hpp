#pragma once

#include <string>
#include <vector>

#include "tlx/domain.hpp"
#include "tlx/kv.hpp"
#include "tlx/normalize.hpp"
#include "tlx/ontology.hpp"
#include "tlx/transfer.hpp"

namespace tlx::test {

// A materialized domain whose LSO k is "#@ann fid = f<k>" followed by lsos[k].
inline LearningDomain make_domain(const std::string& id, const std::string& tbox, const std::string& target,
                                  const std::vector<std::string>& lsos) {
  LearningDomain d;
  d.id = id;
  d.tbox_axioms = parse_ontology(tbox).tbox;
  d.tbox = normalize_tbox(d.tbox_axioms);
  d.target = Entailment::parse(target);
  for (std::size_t k = 0; k < lsos.size(); ++k) {
    std::string key = "f" + std::to_string(k);
    d.lsos.push_back(parse_lso("#@ann fid = " + key + "\n" + lsos[k], key));
    d.lsos.back().key = key;
  }
  materialize_domain(d);
  return d;
}

inline const Corpus& mini_flights() {
  static const Corpus c = [] {
    Corpus c = load_corpus(TLX_DATA_DIR "/mini-flights");
    materialize_corpus(c);
    return c;
  }();
  return c;
}

// Synthetic AUC table for the bundled corpus; stands in for trained models.
inline const FtiMatrix& mini_flights_fti() {
  static const FtiMatrix m = read_auc_csv(read_file(TLX_FIXTURE_DIR "/mini-flights.auc.csv"));
  return m;
}

inline std::vector<const LearningDomain*> ptrs(const Corpus& c) {
  std::vector<const LearningDomain*> out;
  for (const auto& d : c.domains) out.push_back(&d);
  return out;
}

inline const LearningDomain& domain_of(const Corpus& c, const std::string& id) {
  for (const auto& d : c.domains)
    if (d.id == id) return d;
  throw std::out_of_range(id);
}

}  // namespace tlx::test
