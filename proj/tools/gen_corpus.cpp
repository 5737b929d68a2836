#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "tlx/kv.hpp"
#include "tlx/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Writes a synthetic flight-delay corpus.", "tlx-gen-corpus"};
  std::string dir;
  std::string auc_csv;
  std::uint64_t auc_seed = 1;
  tlx::SynthConfig cfg;
  app.add_option("dir", dir, "output directory (replaced)")->required();
  app.add_option("--domains", cfg.domains)->capture_default_str();
  app.add_option("--min-lsos", cfg.min_lsos)->capture_default_str();
  app.add_option("--max-lsos", cfg.max_lsos)->capture_default_str();
  app.add_option("--label-noise", cfg.label_noise)->capture_default_str();
  app.add_option("--seed", cfg.seed)->capture_default_str();
  app.add_option("--auc-csv", auc_csv, "also write a synthetic AUC table here");
  app.add_option("--auc-seed", auc_seed)->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    std::filesystem::remove_all(dir);
    auto corpus = tlx::write_synthetic_corpus(dir, cfg);
    if (!auc_csv.empty()) tlx::write_file(auc_csv, tlx::synthetic_auc_csv(corpus, auc_seed));
    for (const auto& d : corpus.domains)
      std::cout << d.id << '\t' << d.regime << '\t' << d.lsos << " LSOs\n";
  } catch (const std::exception& e) {
    std::cerr << "tlx-gen-corpus: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
