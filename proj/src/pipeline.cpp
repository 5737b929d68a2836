#include "tlx/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace tlx {

namespace {

double to_double(const std::string& v, const std::string& where) {
  double x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw DataError(where + ": not a number: '" + v + "'");
  return x;
}

long long to_int(const std::string& v, const std::string& where) {
  long long x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw DataError(where + ": not an integer: '" + v + "'");
  return x;
}

bool to_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DataError(where + ": expected true or false, got '" + v + "'");
}

std::string lines_of(const std::vector<Entailment>& atoms) {
  std::string out;
  for (const auto& g : atoms) out += g.to_string() + "\n";
  return out;
}

bool has(EvidenceKinds set, EvidenceKinds k) { return (static_cast<int>(set) & static_cast<int>(k)) != 0; }

}  // namespace

void apply_config(PipelineConfig& cfg, const KeyValues& kv, const std::string& origin) {
  for (const auto& [k, v] : kv) {
    const std::string where = origin + " (" + k + ")";
    if (k == "corpus") cfg.corpus = v;
    else if (k == "out") cfg.out = v;
    else if (k == "kb") cfg.kb = v;
    else if (k == "kb-path") cfg.kb_path = v;
    else if (k == "kb-endpoint") cfg.kb_endpoint = v;
    else if (k == "mapping") cfg.mapping_path = v;
    else if (k == "sigma") cfg.mining.sigma = to_double(v, where);
    else if (k == "kappa") cfg.mining.kappa = static_cast<int>(to_int(v, where));
    else if (k == "tau") cfg.mining.tau = to_double(v, where);
    else if (k == "kappa-cap") cfg.mining.kappa_cap = static_cast<int>(to_int(v, where));
    else if (k == "omega1") cfg.omega1 = to_double(v, where);
    else if (k == "omega2") cfg.omega2 = to_double(v, where);
    else if (k == "seed") cfg.train.seed = static_cast<std::uint64_t>(to_int(v, where));
    else if (k == "epochs") cfg.train.epochs = static_cast<int>(to_int(v, where));
    else if (k == "ensemble") cfg.train.ensemble = static_cast<int>(to_int(v, where));
    else if (k == "hidden") cfg.train.hidden = static_cast<int>(to_int(v, where));
    else if (k == "learning-rate") cfg.train.learning_rate = to_double(v, where);
    else if (k == "batch-size") cfg.train.batch_size = static_cast<int>(to_int(v, where));
    else if (k == "train-fraction") cfg.train.train_fraction = to_double(v, where);
    else if (k == "auc-csv") cfg.auc_csv = v;
    else if (k == "epsilon") cfg.evidence.epsilon = to_double(v, where);
    else if (k == "alpha") cfg.evidence.alpha = to_double(v, where);
    else if (k == "max-dim") cfg.max_dim = static_cast<std::size_t>(to_int(v, where));
    else if (k == "early-stop") cfg.early_stop = to_bool(v, where);
    else if (k == "expand-contexts") cfg.expand_contexts = to_bool(v, where);
    else throw DataError(origin + ": unknown configuration key '" + k + "'");
  }
  if (cfg.kb != "file" && cfg.kb != "http" && cfg.kb != "none")
    throw DataError(origin + ": kb must be file, http or none");
  if (cfg.mining.sigma < 0 || cfg.mining.sigma > 1) throw DataError(origin + ": sigma must lie in [0,1]");
  if (cfg.mining.tau < 0 || cfg.mining.tau > 1) throw DataError(origin + ": tau must lie in [0,1]");
  if (cfg.max_dim < 2) throw DataError(origin + ": max-dim must be at least 2");
}

std::vector<std::pair<std::string, std::string>> describe(const PipelineConfig& cfg) {
  return {
      {"corpus", cfg.corpus},
      {"sigma", format_double(cfg.mining.sigma)},
      {"kappa", std::to_string(cfg.mining.kappa)},
      {"tau", format_double(cfg.mining.tau)},
      {"omega1", format_double(cfg.omega1)},
      {"omega2", format_double(cfg.omega2)},
      {"seed", std::to_string(cfg.train.seed)},
      {"epochs", std::to_string(cfg.train.epochs)},
      {"ensemble", std::to_string(cfg.train.ensemble)},
      {"auc_csv", cfg.auc_csv.empty() ? "-" : cfg.auc_csv},
      {"epsilon", format_double(cfg.evidence.epsilon)},
      {"alpha", format_double(cfg.evidence.alpha)},
      {"max_dim", std::to_string(cfg.max_dim)},
      {"early_stop", cfg.early_stop ? "true" : "false"},
      {"expand_contexts", cfg.expand_contexts ? "true" : "false"},
  };
}

EvidenceKinds parse_kinds(const std::string& s) {
  if (s == "general") return EvidenceKinds::General;
  if (s == "narrator") return EvidenceKinds::Narrator;
  if (s == "context") return EvidenceKinds::Context;
  if (s == "all") return EvidenceKinds::All;
  throw std::invalid_argument("unknown evidence kind '" + s + "' (general, narrator, context, all)");
}

Pipeline::Pipeline(PipelineConfig cfg, std::ostream* log) : cfg_(std::move(cfg)), log_(log) {
  if (cfg_.corpus.empty()) throw DataError("no corpus given");
}

Pipeline::~Pipeline() = default;

void Pipeline::note(const std::string& msg) {
  if (log_) *log_ << msg << '\n';
}

std::string Pipeline::path(const std::string& rel) const { return (fs::path(cfg_.out) / rel).string(); }

Corpus& Pipeline::corpus() {
  if (!corpus_) {
    corpus_ = load_corpus(cfg_.corpus);
    materialize_corpus(*corpus_);
  }
  return *corpus_;
}

void Pipeline::materialize() {
  for (const auto& d : corpus().domains) {
    write_file(path("closures/" + d.id + ".closure"), lines_of(d.domain_closure));
    std::string msg = d.id + ": " + std::to_string(d.lsos.size()) + " LSOs, " +
                      std::to_string(d.domain_closure.size()) + " entailments";
    if (!d.inconsistent_lsos.empty()) msg += ", " + std::to_string(d.inconsistent_lsos.size()) + " inconsistent";
    note(msg);
  }
}

std::map<std::string, RootSet> Pipeline::mine_roots() {
  std::map<std::string, RootSet> out;
  for (const auto& d : corpus().domains) {
    RootSet r = tlx::mine_roots(d, cfg_.mining);
    write_file(path("roots/" + d.id + ".roots"), render_roots(r));
    std::string inds;
    for (const auto& i : r.root_individuals) inds += i + "\n";
    write_file(path("roots/" + d.id + ".individuals"), inds);
    note(d.id + ": " + std::to_string(r.root_entailments.size()) + " root entailments, " +
         std::to_string(r.root_individuals.size()) + " root individuals");
    out.emplace(d.id, std::move(r));
  }
  return out;
}

VocabularyMapping Pipeline::load_mapping() {
  std::string p = cfg_.mapping_path.empty() ? corpus().mapping_path : cfg_.mapping_path;
  if (p.empty()) {
    VocabularyMapping m;
    m.drop_unmapped = false;
    return m;
  }
  return parse_mapping(read_file(p), p);
}

std::unique_ptr<KbAdapter> Pipeline::make_adapter() {
  if (cfg_.kb == "none") return nullptr;
  if (cfg_.kb == "http") {
    if (cfg_.kb_endpoint.empty()) throw DataError("kb = http needs kb-endpoint");
    HttpKbConfig h;
    h.endpoint = cfg_.kb_endpoint;
    return std::make_unique<HttpKb>(h);
  }
  std::string p = cfg_.kb_path.empty() ? corpus().kb_path : cfg_.kb_path;
  if (p.empty()) return nullptr;
  return std::make_unique<FileKb>(FileKb::load(p));
}

void Pipeline::import_external() {
  if (imported_) return;
  Corpus& c = corpus();
  std::unique_ptr<KbAdapter> adapter;
  std::optional<VocabularyMapping> mapping;
  std::optional<std::map<std::string, RootSet>> roots;
  for (auto& d : c.domains) {
    const std::size_t inconsistent_before = d.inconsistent_lsos.size();
    const std::string abox_path = path("external/" + d.id + ".abox");
    if (!cfg_.force && fs::exists(abox_path)) {
      Ontology o;
      try {
        o = parse_ontology(read_file(abox_path));
      } catch (const std::exception& e) {
        throw DataError(abox_path + ": " + e.what());
      }
      d.external_axioms = std::move(o.abox);
      materialize_domain(d);
      note(d.id + ": reused " + std::to_string(d.external_axioms.size()) + " external axioms");
    } else {
      if (!adapter && cfg_.kb != "none") adapter = make_adapter();
      std::string abox;
      if (adapter) {
        if (!mapping) mapping = load_mapping();
        if (!roots) roots = mine_roots();
        ImportResult r = tlx::import_external(d, roots->at(d.id).root_individuals, *adapter, *mapping, c.constraints);
        write_file(path("external/" + d.id + ".audit.tsv"), render_audit(r.audit));
        if (r.aborted) throw DataError(d.id + ": import aborted: " + r.error);
        for (const auto& ax : r.external_axioms) abox += to_string(ax) + "\n";
        std::size_t accepted = 0, rejected = 0;
        for (const auto& a : r.audit) {
          accepted += a.outcome == AuditEntry::Outcome::Accepted;
          rejected += a.outcome == AuditEntry::Outcome::Rejected;
        }
        note(d.id + ": imported " + std::to_string(r.external_axioms.size()) + " axioms (" +
             std::to_string(accepted) + " entities accepted, " + std::to_string(rejected) + " rejected)");
      }
      write_file(abox_path, abox);
    }
    if (d.inconsistent_lsos.size() > inconsistent_before)
      throw DataError(d.id + ": LSO " + d.inconsistent_lsos.front() + " is inconsistent after import");
    write_file(path("external/" + d.id + ".closure"), lines_of(d.domain_closure));
  }
  imported_ = true;
  engine_.reset();
}

const FtiMatrix& Pipeline::fti() {
  if (fti_) return *fti_;
  const std::string csv = path("fti/auc.csv");
  if (!cfg_.auc_csv.empty()) {
    fti_ = read_auc_csv(read_file(cfg_.auc_csv), cfg_.omega1, cfg_.omega2, cfg_.auc_csv);
    note("read " + std::to_string(fti_->records.size()) + " transfers from " + cfg_.auc_csv);
  } else if (!cfg_.force && fs::exists(csv)) {
    fti_ = read_auc_csv(read_file(csv), cfg_.omega1, cfg_.omega2, csv);
    note("reused " + std::to_string(fti_->records.size()) + " transfers from " + csv);
  } else {
    import_external();
    std::vector<const LearningDomain*> ds;
    for (const auto& d : corpus().domains) ds.push_back(&d);
    fti_ = fti_matrix(ds, cfg_.train, cfg_.omega1, cfg_.omega2, [&](const std::string& m) { note(m); });
    note("trained " + std::to_string(fti_->records.size()) + " transfers");
  }
  for (const auto& s : fti_->skipped) note("skipped " + s);
  write_file(csv, write_auc_csv(*fti_));
  write_file(path("fti/fti.tsv"), write_fti_table(*fti_));
  return *fti_;
}

EvidenceEngine& Pipeline::engine() {
  if (!engine_) {
    const FtiMatrix& m = fti();
    import_external();
    std::vector<const LearningDomain*> ds;
    for (const auto& d : corpus().domains) ds.push_back(&d);
    // only domains named in the matrix take part
    std::set<std::string> named;
    for (const auto& [k, r] : m.records) {
      named.insert(k.first);
      named.insert(k.second);
    }
    std::erase_if(ds, [&](const LearningDomain* d) { return !named.count(d->id); });
    for (const auto& id : named)
      if (std::none_of(ds.begin(), ds.end(), [&](const LearningDomain* d) { return d->id == id; }))
        throw DataError("transfer table names domain '" + id + "' which is not in the corpus");
    engine_ = std::make_unique<EvidenceEngine>(ds, m, cfg_.evidence);
  }
  return *engine_;
}

Pipeline::Explained Pipeline::explain(EvidenceKinds kinds, const ContextSink& stream) {
  EvidenceEngine& e = engine();
  Explained out;
  if (has(kinds, EvidenceKinds::General)) {
    auto g = e.general_factors();
    write_file(path("evidence/general.tsv"), evidence_table(g));
    out.results.insert(out.results.end(), g.begin(), g.end());
  }
  if (has(kinds, EvidenceKinds::Narrator)) {
    auto n = e.narrators();
    write_file(path("evidence/narrator.tsv"), evidence_table(n));
    out.results.insert(out.results.end(), n.begin(), n.end());
  }
  if (has(kinds, EvidenceKinds::Context)) {
    SearchConfig sc;
    sc.max_dim = cfg_.max_dim;
    sc.early_stop = cfg_.early_stop;
    sc.expand = cfg_.expand_contexts;
    std::string clusters;
    for (const auto& m : sync_clusters(e).members) {
      if (m.size() < 2) continue;
      for (std::size_t k = 0; k < m.size(); ++k) clusters += (k ? "\t" : "") + e.universe()[m[k]].to_string();
      clusters += '\n';
    }
    write_file(path("evidence/clusters.tsv"), clusters);
    std::vector<EvidenceResult> contexts;
    out.search = core_context_search(e, sc, [&](const ContextRecord& r) {
      if (stream) stream(r);
      contexts.push_back(r.result);
    });
    write_file(path("evidence/context.tsv"), evidence_table(contexts));
    write_file(path("evidence/search_summary.txt"), search_summary(*out.search));
    out.results.insert(out.results.end(), contexts.begin(), contexts.end());
  }
  return out;
}

ExplanationReport Pipeline::report(EvidenceKinds kinds, const ReportQuery& query) {
  Explained ex = explain(kinds);
  ExplanationReport rep = build_report(engine(), fti(), ex.results, query);
  rep.meta = describe(cfg_);
  rep.meta.emplace_back("domains", std::to_string(engine().domains().size()));
  rep.meta.emplace_back("transfers", std::to_string(fti().records.size()));
  rep.meta.emplace_back("evidence_evaluated", std::to_string(ex.results.size()));
  std::size_t valid = 0;
  for (const auto& r : ex.results) valid += r.valid;
  rep.meta.emplace_back("evidence_valid", std::to_string(valid));
  rep.meta.emplace_back("sentences", std::to_string(rep.sentence_count()));
  write_file(path("report.txt"), render_text(rep));
  write_file(path("report.json"), render_json(rep));
  return rep;
}

std::string search_summary(const SearchStats& s) {
  std::ostringstream out;
  out << "visited\t" << s.visited << "\nearly_stopped\t" << s.early_stopped << "\nfast_extended\t" << s.fast_extended
      << '\n';
  for (const auto& [dim, n] : s.emitted_by_dim) {
    auto it = s.valid_by_dim.find(dim);
    out << "dim " << dim << "\temitted " << n << "\tvalid " << (it == s.valid_by_dim.end() ? 0 : it->second)
        << '\n';
  }
  return out.str();
}

}  // namespace tlx
