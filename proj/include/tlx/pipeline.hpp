#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tlx/domain.hpp"
#include "tlx/evidence.hpp"
#include "tlx/kb.hpp"
#include "tlx/kv.hpp"
#include "tlx/mining.hpp"
#include "tlx/report.hpp"
#include "tlx/search.hpp"
#include "tlx/transfer.hpp"

namespace tlx {

struct PipelineConfig {
  std::string corpus;
  std::string out = "tlx-out";
  std::string kb = "file";  // file | http | none
  std::string kb_path;      // defaults to the corpus manifest entry
  std::string kb_endpoint;
  std::string mapping_path;
  MiningParams mining;
  TrainConfig train;
  double omega1 = 1;
  double omega2 = 1;
  std::string auc_csv;
  EvidenceConfig evidence;
  std::size_t max_dim = 4;
  bool early_stop = true;
  // List every co-member context instead of counting them; combinatorial on real corpora.
  bool expand_contexts = false;
  bool force = false;  // recompute stages whose artifacts already exist
};

// Applies "key = value" entries; keys match the long flag names without dashes
// ("sigma", "max-dim", ...). Throws DataError on unknown keys or bad values.
void apply_config(PipelineConfig& cfg, const KeyValues& kv, const std::string& origin);
std::vector<std::pair<std::string, std::string>> describe(const PipelineConfig& cfg);

enum class EvidenceKinds { General = 1, Narrator = 2, Context = 4, All = 7 };
inline EvidenceKinds operator|(EvidenceKinds a, EvidenceKinds b) {
  return static_cast<EvidenceKinds>(static_cast<int>(a) | static_cast<int>(b));
}
EvidenceKinds parse_kinds(const std::string& s);

/// Stage runner over one output directory.
///
///   out/closures/<id>.closure      sorted closure atoms before import
///   out/roots/<id>.roots           root entailments
///   out/roots/<id>.individuals     root individuals
///   out/external/<id>.abox         accepted external axioms
///   out/external/<id>.audit.tsv    per-individual import decisions
///   out/external/<id>.closure      closure after import
///   out/fti/auc.csv, out/fti/fti.tsv
///   out/evidence/<kind>.tsv, out/evidence/search_summary.txt
///   out/evidence/clusters.tsv      synchronized clusters, representative first
///   out/report.txt, out/report.json
///
/// Import and training reuse their artifacts when present; the other stages
/// are cheap and always rewrite theirs.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg, std::ostream* log = nullptr);
  ~Pipeline();

  const PipelineConfig& config() const { return cfg_; }
  Corpus& corpus();

  void materialize();
  std::map<std::string, RootSet> mine_roots();
  void import_external();
  const FtiMatrix& fti();
  EvidenceEngine& engine();

  struct Explained {
    std::vector<EvidenceResult> results;
    std::optional<SearchStats> search;
  };
  Explained explain(EvidenceKinds kinds, const ContextSink& stream = {});
  ExplanationReport report(EvidenceKinds kinds, const ReportQuery& query);

  std::string path(const std::string& rel) const;

 private:
  void note(const std::string& msg);
  std::unique_ptr<KbAdapter> make_adapter();
  VocabularyMapping load_mapping();

  PipelineConfig cfg_;
  std::ostream* log_;
  std::optional<Corpus> corpus_;
  bool imported_ = false;
  std::optional<FtiMatrix> fti_;
  std::unique_ptr<EvidenceEngine> engine_;
};

std::string search_summary(const SearchStats& s);

}  // namespace tlx
