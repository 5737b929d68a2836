#include "tlx/domain.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <random>
#include <regex>

namespace fs = std::filesystem;

namespace tlx {

namespace {

std::pair<std::string, std::string> pragma_pair(const std::string& body, const std::string& where) {
  auto eq = body.find('=');
  if (eq == std::string::npos) throw DataError(where + ": pragma needs 'key = value'");
  std::string k = trim(std::string_view(body).substr(0, eq));
  std::string v = trim(std::string_view(body).substr(eq + 1));
  if (k.empty() || v.empty()) throw DataError(where + ": empty pragma key or value");
  return {k, v};
}

double parse_number(const std::string& s, const std::string& where) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError(where + ": not a number: " + s);
  return v;
}

}  // namespace

Lso parse_lso(std::string_view text, const std::string& origin) {
  Lso lso;
  std::size_t line_no = 0;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    std::string t = trim(line);
    std::string where = origin + ":" + std::to_string(line_no);
    if (t.rfind("#@ann", 0) == 0) {
      auto [k, v] = pragma_pair(t.substr(5), where);
      lso.annotations[k] = v;
    } else if (t.rfind("#@val", 0) == 0) {
      auto [k, v] = pragma_pair(t.substr(5), where);
      lso.values[k] = parse_number(v, where);
    }
  }
  Ontology o;
  try {
    o = parse_ontology(text);
  } catch (const ParseError& e) {
    throw DataError(origin + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                    e.what());
  } catch (const SignatureError& e) {
    throw DataError(origin + ": " + e.what());
  }
  if (!o.tbox.empty()) throw DataError(origin + ": LSO files may not contain TBox axioms");
  if (lso.annotations.empty()) throw DataError(origin + ": LSO has no #@ann annotations");
  lso.abox = std::move(o.abox);
  return lso;
}

std::string serialize_lso(const Lso& lso) {
  std::string out;
  for (const auto& [k, v] : lso.annotations) out += "#@ann " + k + " = " + v + "\n";
  for (const auto& [k, v] : lso.values) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out += "#@val " + k + " = " + std::string(buf, ptr) + "\n";
  }
  for (const auto& ax : lso.abox) out += to_string(ax) + "\n";
  return out;
}

DomainManifest parse_domain_manifest(std::string_view text, const std::string& origin) {
  DomainManifest m;
  bool has_target = false;
  for (const auto& [k, v] : parse_key_values(text, origin)) {
    if (k == "id") {
      m.id = v;
    } else if (k == "target") {
      try {
        m.target = Entailment::parse(v);
      } catch (const std::exception& e) {
        throw DataError(origin + ": bad target entailment '" + v + "'");
      }
      if (m.target.kind == Entailment::Kind::Equality)
        throw DataError(origin + ": target must be a class or role atom");
      has_target = true;
    } else if (k == "tbox") {
      m.tbox = v;
    } else if (k == "annotation_schema") {
      for (const auto& p : split(v, ',')) {
        std::string name = trim(p);
        if (!name.empty()) m.annotation_schema.push_back(name);
      }
    } else if (k == "key") {
      m.key = v;
    } else if (k == "lso_dir") {
      m.lso_dir = v;
    } else {
      throw DataError(origin + ": unknown manifest key '" + k + "'");
    }
  }
  if (m.id.empty()) throw DataError(origin + ": missing 'id'");
  if (!has_target) throw DataError(origin + ": missing 'target'");
  if (m.tbox.empty()) throw DataError(origin + ": missing 'tbox'");
  return m;
}

LearningDomain load_domain(const std::string& dir) {
  std::string manifest_path = (fs::path(dir) / "domain.manifest").string();
  DomainManifest m = parse_domain_manifest(read_file(manifest_path), manifest_path);
  LearningDomain d;
  d.id = m.id;
  d.target = m.target;

  std::string tbox_path = (fs::path(dir) / m.tbox).string();
  Ontology t;
  try {
    t = parse_ontology(read_file(tbox_path));
  } catch (const ParseError& e) {
    throw DataError(tbox_path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                    e.what());
  } catch (const SignatureError& e) {
    throw DataError(tbox_path + ": " + e.what());
  }
  if (!t.abox.empty()) throw DataError(tbox_path + ": TBox file contains ABox axioms");
  d.tbox_axioms = std::move(t.tbox);
  d.tbox = normalize_tbox(d.tbox_axioms);

  fs::path lso_dir = fs::path(dir) / m.lso_dir;
  if (!fs::is_directory(lso_dir)) throw DataError(lso_dir.string() + ": LSO directory missing");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(lso_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".onto") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    Lso lso = parse_lso(read_file(f.string()), f.string());
    lso.key = f.stem().string();
    for (const auto& prop : m.annotation_schema)
      if (!lso.annotations.count(prop))
        throw DataError(f.string() + ": missing annotation '" + prop + "'");
    if (!m.key.empty()) {
      auto it = lso.annotations.find(m.key);
      if (it == lso.annotations.end() || it->second != lso.key)
        throw DataError(f.string() + ": file name must equal annotation '" + m.key + "'");
    }
    d.lsos.push_back(std::move(lso));
  }
  if (d.lsos.empty()) throw DataError(dir + ": domain has no LSOs");
  return d;
}

Corpus load_corpus(const std::string& dir) {
  std::string manifest_path = (fs::path(dir) / "corpus.manifest").string();
  Corpus c;
  c.root = dir;
  std::vector<std::string> domain_dirs;
  for (const auto& [k, v] : parse_key_values(read_file(manifest_path), manifest_path)) {
    std::string path = (fs::path(dir) / v).string();
    if (k == "domain") {
      domain_dirs.push_back(path);
    } else if (k == "constraints") {
      Ontology o;
      try {
        o = parse_ontology(read_file(path));
      } catch (const ParseError& e) {
        throw DataError(path + ":" + std::to_string(e.line()) + ": " + e.what());
      }
      if (!o.abox.empty()) throw DataError(path + ": constraint file contains ABox axioms");
      c.constraints = std::move(o.tbox);
    } else if (k == "kb") {
      c.kb_path = path;
    } else if (k == "mapping") {
      c.mapping_path = path;
    } else {
      throw DataError(manifest_path + ": unknown key '" + k + "'");
    }
  }
  if (domain_dirs.empty()) throw DataError(manifest_path + ": no 'domain' entries");
  for (const auto& d : domain_dirs) c.domains.push_back(load_domain(d));
  std::sort(c.domains.begin(), c.domains.end(),
            [](const LearningDomain& a, const LearningDomain& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < c.domains.size(); ++i)
    if (c.domains[i].id == c.domains[i - 1].id) throw DataError("duplicate domain id " + c.domains[i].id);
  return c;
}

void materialize_domain(LearningDomain& d) {
  Reasoner reasoner(d.tbox);
  d.closures.clear();
  d.inconsistent_lsos.clear();
  std::vector<Entailment> all;
  for (const auto& lso : d.lsos) {
    std::vector<ABoxAxiom> abox = lso.abox;
    abox.insert(abox.end(), d.external_axioms.begin(), d.external_axioms.end());
    EntailmentClosure c = reasoner.materialize(abox);
    if (c.inconsistent()) {
      d.inconsistent_lsos.push_back(lso.key);
    } else {
      all.insert(all.end(), c.atoms().begin(), c.atoms().end());
    }
    d.closures.push_back(std::move(c));
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  d.domain_closure = std::move(all);
  d.materialized = true;
}

void materialize_corpus(Corpus& c) {
  for (auto& d : c.domains) materialize_domain(d);
}

std::map<std::string, std::string> domain_annotation(const LearningDomain& d) {
  std::map<std::string, std::string> common;
  if (!d.lsos.empty()) {
    common = d.lsos.front().annotations;
    for (const auto& lso : d.lsos) {
      std::erase_if(common, [&](const auto& kv) {
        auto it = lso.annotations.find(kv.first);
        return it == lso.annotations.end() || it->second != kv.second;
      });
    }
  }
  common["t_e"] = d.target.to_string();
  return common;
}

std::vector<Entailment> build_vocabulary(const LearningDomain& d) {
  std::vector<Entailment> out;
  for (const auto& g : d.domain_closure)
    if (!(g == d.target)) out.push_back(g);
  return out;
}

std::vector<Entailment> union_vocabulary(const std::vector<const LearningDomain*>& domains) {
  std::vector<Entailment> out;
  for (const auto* d : domains) {
    auto v = build_vocabulary(*d);
    out.insert(out.end(), v.begin(), v.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  // a target of one domain is never an input bit of another
  std::erase_if(out, [&](const Entailment& g) {
    return std::any_of(domains.begin(), domains.end(), [&](const LearningDomain* d) { return d->target == g; });
  });
  return out;
}

std::vector<std::string> value_properties(const std::vector<const LearningDomain*>& domains) {
  std::set<std::string> props;
  for (const auto* d : domains)
    for (const auto& lso : d->lsos)
      for (const auto& [k, v] : lso.values) props.insert(k);
  return {props.begin(), props.end()};
}

std::vector<double> FeatureVector::combined() const {
  std::vector<double> out(boe.begin(), boe.end());
  out.insert(out.end(), values.begin(), values.end());
  return out;
}

FeatureVector boe_encode(const Lso& lso, const EntailmentClosure& closure, const std::vector<Entailment>& vocab,
                         const Entailment& target, const std::vector<std::string>& value_props) {
  if (closure.inconsistent())
    throw DataError("LSO '" + lso.key + "' is inconsistent (" + closure.inconsistency_witness() +
                    "); refusing to encode");
  FeatureVector fv;
  fv.boe.resize(vocab.size(), 0);
  const auto& atoms = closure.atoms();
  // both lists are sorted: merge walk
  std::size_t j = 0;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    while (j < atoms.size() && atoms[j] < vocab[i]) ++j;
    if (j < atoms.size() && atoms[j] == vocab[i]) fv.boe[i] = 1;
  }
  for (const auto& p : value_props) {
    auto it = lso.values.find(p);
    fv.values.push_back(it == lso.values.end() ? 0.0 : it->second);
  }
  fv.label = closure.entails(target) ? 1 : 0;
  return fv;
}

std::string date_sort_key(const std::string& dat) {
  static const std::regex us(R"((\d{1,2})/(\d{1,2})/(\d{4}))");
  std::smatch m;
  if (std::regex_match(dat, m, us)) {
    auto pad = [](const std::string& s) { return s.size() == 1 ? "0" + s : s; };
    return m[3].str() + "-" + pad(m[1].str()) + "-" + pad(m[2].str());
  }
  return dat;
}

Split split_domain(const LearningDomain& d, double train_fraction, std::uint64_t seed) {
  std::vector<std::size_t> idx;
  std::set<std::string> bad(d.inconsistent_lsos.begin(), d.inconsistent_lsos.end());
  for (std::size_t i = 0; i < d.lsos.size(); ++i)
    if (!bad.count(d.lsos[i].key)) idx.push_back(i);
  Split s;
  if (idx.empty()) return s;
  std::size_t cut = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
  cut = std::clamp<std::size_t>(cut, 1, idx.size() > 1 ? idx.size() - 1 : 1);

  bool dated = std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return d.lsos[i].annotations.count("dat"); });
  if (dated) {
    auto key = [&](std::size_t i) { return date_sort_key(d.lsos[i].annotations.at("dat")); };
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::make_pair(key(a), d.lsos[a].key) < std::make_pair(key(b), d.lsos[b].key);
    });
    // everything dated at or before the cut date trains
    std::string t0 = key(idx[cut - 1]);
    std::size_t n_train = 0;
    while (n_train < idx.size() && key(idx[n_train]) <= t0) ++n_train;
    if (n_train == idx.size()) n_train = cut;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    return s;
  }
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cut));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

}  // namespace tlx
