#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selftest.hpp"
#include "tlx/kv.hpp"
#include "tlx/pipeline.hpp"

namespace {

using namespace tlx;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string corpus;
  std::string out = "tlx-out";
  std::string config;
  bool force = false;
  bool quiet = false;
  KeyValues flags;  // pipeline flags in command-line order

  std::string kind = "all";
  bool stream = false;
  std::string source, target, format = "text";
  std::size_t limit = 0;
};

const std::pair<const char*, const char*> kPipelineFlags[] = {
    {"kb", "KB adapter: file, http or none"},
    {"kb-path", "KB file (default: corpus manifest entry)"},
    {"kb-endpoint", "KB HTTP endpoint for --kb http"},
    {"mapping", "vocabulary mapping file"},
    {"sigma", "frequency threshold for root mining"},
    {"kappa", "effective subset size"},
    {"tau", "effectiveness threshold"},
    {"kappa-cap", "largest kappa accepted"},
    {"omega1", "weight of the generalization index"},
    {"omega2", "weight of the specialization index"},
    {"seed", "training seed"},
    {"epochs", "training epochs"},
    {"ensemble", "ensemble size"},
    {"hidden", "hidden units"},
    {"learning-rate", "learning rate"},
    {"batch-size", "batch size"},
    {"train-fraction", "chronological training fraction"},
    {"auc-csv", "precomputed AUC table; skips training"},
    {"epsilon", "minimum |gamma| for valid evidence"},
    {"alpha", "significance level"},
    {"max-dim", "largest context size"},
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--corpus", o.corpus, "corpus directory");
  sub->add_option("--out", o.out, "output directory")->capture_default_str();
  sub->add_option("--config", o.config, "key = value file; its entries override flags");
  sub->add_flag("--force", o.force, "recompute stages whose artifacts exist");
  sub->add_flag("-q,--quiet", o.quiet, "no progress messages");
  for (const auto& [name, help] : kPipelineFlags) {
    std::string key = name;
    sub->add_option_function<std::string>(
           "--" + key, [&o, key](const std::string& v) { o.flags.emplace_back(key, v); }, help)
        ->group("Pipeline");
  }
  sub->add_flag_callback("--no-early-stop", [&o] { o.flags.emplace_back("early-stop", "false"); },
                         "evaluate every context")
      ->group("Pipeline");
  sub->add_flag_callback("--expand-contexts", [&o] { o.flags.emplace_back("expand-contexts", "true"); },
                         "list synchronized variants of each context")
      ->group("Pipeline");
}

PipelineConfig build_config(const Options& o) {
  PipelineConfig cfg;
  cfg.corpus = o.corpus;
  cfg.out = o.out;
  cfg.force = o.force;
  try {
    apply_config(cfg, o.flags, "command line");
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  if (!o.config.empty()) {
    if (!std::filesystem::exists(o.config)) throw DataError("config file not found: " + o.config);
    apply_config(cfg, parse_key_values(read_file(o.config), o.config), o.config);
  }
  if (cfg.corpus.empty()) throw UsageError("no corpus given; pass --corpus DIR or set corpus in --config");
  if (!std::filesystem::is_directory(cfg.corpus)) throw DataError("corpus directory not found: " + cfg.corpus);
  return cfg;
}

class Timer {
 public:
  explicit Timer(std::vector<std::pair<std::string, double>>& log) : log_(log) {}
  template <class F>
  auto operator()(const std::string& stage, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    struct Done {
      Timer* t;
      std::string stage;
      std::chrono::steady_clock::time_point t0;
      ~Done() {
        t->log_.emplace_back(stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      }
    } done{this, stage, t0};
    return f();
  }

 private:
  std::vector<std::pair<std::string, double>>& log_;
};

int run(int argc, char** argv) {
  CLI::App app{"Explains transfer learning outcomes through ontology entailments.", "tlx"};
  app.require_subcommand(1);
  Options o;

  auto* materialize = app.add_subcommand("materialize", "compute and store LSO closures");
  auto* mine = app.add_subcommand("mine-roots", "mine root entailments and individuals");
  auto* import = app.add_subcommand("import-external", "import consistent KB axioms for root individuals");
  auto* fti = app.add_subcommand("fti", "train or read transfers and build the FTI matrix");
  auto* explain = app.add_subcommand("explain", "evaluate general factors, narrators and contexts");
  auto* report = app.add_subcommand("report", "render the explanation report");
  auto* selftest = app.add_subcommand("selftest", "run the embedded oracle checks");
  for (auto* s : {materialize, mine, import, fti, explain, report}) add_common(s, o);
  for (auto* s : {explain, report})
    s->add_option("--kind", o.kind, "general, narrator, context or all")
        ->check(CLI::IsMember({"general", "narrator", "context", "all"}))
        ->capture_default_str();
  explain->add_flag("--stream", o.stream, "print contexts as they are found");
  report->add_option("--source", o.source, "only transfers from this domain");
  report->add_option("--target", o.target, "only transfers into this domain");
  report->add_option("--limit", o.limit, "sentences per transfer (0 keeps all)");
  report->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (selftest->parsed()) return oracle::run_selftest(std::cout) == 0 ? 0 : 2;

  PipelineConfig cfg = build_config(o);
  Pipeline p(cfg, o.quiet ? nullptr : &std::cerr);
  std::vector<std::pair<std::string, double>> timings;
  Timer timed(timings);

  if (materialize->parsed()) {
    timed("materialize", [&] { p.materialize(); });
  } else if (mine->parsed()) {
    timed("mine-roots", [&] { p.mine_roots(); });
  } else if (import->parsed()) {
    timed("import-external", [&] { p.import_external(); });
  } else if (fti->parsed()) {
    timed("fti", [&] { p.fti(); });
    std::cout << read_file(p.path("fti/fti.tsv"));
  } else if (explain->parsed()) {
    EvidenceKinds kinds = parse_kinds(o.kind);
    timed("fti", [&] { p.engine(); });
    ContextSink sink;
    if (o.stream)
      sink = [](const ContextRecord& r) {
        std::cout << r.result.evidence.to_string() << '\t' << format_double(r.result.gamma) << '\t'
                  << format_double(r.result.rho) << '\t' << (r.result.valid ? "valid" : "invalid") << '\n';
      };
    auto ex = timed("explain", [&] { return p.explain(kinds, sink); });
    if (!o.stream) std::cout << evidence_table(ex.results);
    if (ex.search) std::cerr << search_summary(*ex.search);
  } else if (report->parsed()) {
    EvidenceKinds kinds = parse_kinds(o.kind);
    timed("fti", [&] { p.engine(); });
    ReportQuery q{o.source, o.target, o.limit};
    auto rep = timed("report", [&] { return p.report(kinds, q); });
    std::cout << (o.format == "json" ? render_json(rep) : render_text(rep));
  }

  std::string t;
  for (const auto& [stage, secs] : timings) t += stage + "\t" + format_double(secs) + "\n";
  write_file(p.path("timings.tsv"), t);
  if (!o.quiet)
    for (const auto& [stage, secs] : timings) std::cerr << stage << ": " << secs << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "tlx: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "tlx: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "tlx: " << e.what() << '\n';
    return 2;
  }
}
