#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tlx/entailment.hpp"
#include "tlx/kv.hpp"
#include "tlx/normalize.hpp"
#include "tlx/ontology.hpp"
#include "tlx/reasoner.hpp"

namespace tlx {

struct Lso {
  std::string key;
  std::map<std::string, std::string> annotations;
  std::vector<ABoxAxiom> abox;
  std::map<std::string, double> values;
};

/// A set of LSOs sharing one TBox and one target entailment.
///
/// `closures` and `domain_closure` are filled by materialize_domain(); they
/// reflect `external_axioms` as of that call.
struct LearningDomain {
  std::string id;
  std::vector<TBoxAxiom> tbox_axioms;
  NormalizedTBox tbox;
  Entailment target;
  std::vector<Lso> lsos;
  std::vector<ABoxAxiom> external_axioms;

  std::vector<EntailmentClosure> closures;
  std::vector<Entailment> domain_closure;  // sorted union over consistent LSOs
  std::vector<std::string> inconsistent_lsos;
  bool materialized = false;
};

// Parses one LSO file: ABox axioms plus "#@ann k = v" and "#@val p = x" pragmas.
Lso parse_lso(std::string_view text, const std::string& origin);
std::string serialize_lso(const Lso& lso);

struct DomainManifest {
  std::string id;
  Entailment target;
  std::string tbox;  // path relative to the domain dir
  std::vector<std::string> annotation_schema;
  std::string key;
  std::string lso_dir = "lsos";
};

DomainManifest parse_domain_manifest(std::string_view text, const std::string& origin);
LearningDomain load_domain(const std::string& dir);

struct Corpus {
  std::string root;
  std::vector<LearningDomain> domains;
  std::vector<TBoxAxiom> constraints;
  std::string kb_path;       // empty when absent
  std::string mapping_path;  // empty when absent
};

// Reads corpus.manifest: repeated "domain = dir", optional constraints, kb, mapping.
Corpus load_corpus(const std::string& dir);

// Materializes every LSO with the domain TBox and external axioms.
void materialize_domain(LearningDomain& d);
void materialize_corpus(Corpus& c);

std::map<std::string, std::string> domain_annotation(const LearningDomain& d);

// Sorted entailments occurring in at least one consistent LSO closure, minus the target.
std::vector<Entailment> build_vocabulary(const LearningDomain& d);
// Sorted union of the per-domain vocabularies.
std::vector<Entailment> union_vocabulary(const std::vector<const LearningDomain*>& domains);
// Sorted data properties present in at least one LSO of the given domains.
std::vector<std::string> value_properties(const std::vector<const LearningDomain*>& domains);

struct FeatureVector {
  std::vector<std::uint8_t> boe;
  std::vector<double> values;
  int label = 0;
  std::vector<double> combined() const;
};

// Throws DataError naming the LSO when its closure is inconsistent.
FeatureVector boe_encode(const Lso& lso, const EntailmentClosure& closure,
                         const std::vector<Entailment>& vocab, const Entailment& target,
                         const std::vector<std::string>& value_props = {});

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Chronological on the "dat" annotation when every LSO has one, otherwise a
// seeded shuffle. Indices refer to d.lsos; inconsistent LSOs are left out.
Split split_domain(const LearningDomain& d, double train_fraction, std::uint64_t seed);

// Sortable key for "dat" values: MM/DD/YYYY becomes YYYY-MM-DD, others pass through.
std::string date_sort_key(const std::string& dat);

}  // namespace tlx
