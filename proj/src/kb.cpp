#include "tlx/kb.hpp"

#include <algorithm>
#include <random>

namespace tlx {

std::string normalize_label(const std::string& s) {
  std::string out;
  bool pending_space = false;
  for (unsigned char ch : s) {
    char c = static_cast<char>(std::tolower(ch));
    if (c == '_' || c == '-' || std::isspace(ch)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

FileKb FileKb::from_text(const std::string& text, const std::string& origin) {
  FileKb kb;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    auto fields = split(line, '\t');
    std::string where = origin + ":" + std::to_string(line_no);
    if (fields.size() < 2 || fields.size() > 4) throw DataError(where + ": expected 2 to 4 tab-separated fields");
    fields.resize(4);
    KbEntity e;
    e.id = trim(fields[0]);
    if (e.id.empty()) throw DataError(where + ": empty entity id");
    for (const auto& l : split(fields[1], '|'))
      if (!trim(l).empty()) e.labels.push_back(trim(l));
    if (e.labels.empty()) throw DataError(where + ": entity '" + e.id + "' has no labels");
    for (const auto& t : split(fields[2], '|'))
      if (!trim(t).empty()) e.types.push_back(trim(t));
    for (const auto& p : split(fields[3], ';')) {
      if (trim(p).empty()) continue;
      auto eq = p.find('=');
      if (eq == std::string::npos) throw DataError(where + ": property '" + p + "' lacks '='");
      e.properties.emplace_back(trim(p.substr(0, eq)), trim(p.substr(eq + 1)));
    }
    if (kb.by_id_.count(e.id)) throw DataError(where + ": duplicate entity id '" + e.id + "'");
    kb.by_id_[e.id] = kb.entities_.size();
    kb.entities_.push_back(std::move(e));
  }
  return kb;
}

FileKb FileKb::load(const std::string& path) { return from_text(read_file(path), path); }

std::vector<KbEntity> FileKb::lookup_by_name(const std::string& name) {
  std::string key = normalize_label(name);
  std::vector<KbEntity> out;
  for (const auto& e : entities_)
    if (std::any_of(e.labels.begin(), e.labels.end(), [&](const auto& l) { return normalize_label(l) == key; }))
      out.push_back(e);
  return out;
}

KbEntity FileKb::describe(const std::string& entity_id) {
  auto it = by_id_.find(entity_id);
  if (it == by_id_.end()) throw DataError("unknown entity '" + entity_id + "'");
  return entities_[it->second];
}

std::vector<std::map<std::string, std::string>> parse_bindings(const std::string& text) {
  auto strip = [](std::string v) {
    v = trim(v);
    if (v.size() >= 2 && ((v.front() == '<' && v.back() == '>') || (v.front() == '"' && v.back() == '"')))
      v = v.substr(1, v.size() - 2);
    return v;
  };
  std::vector<std::map<std::string, std::string>> rows;
  std::vector<std::string> header;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto cells = split(line, '\t');
    if (header.empty()) {
      for (auto& c : cells) {
        std::string h = trim(c);
        if (!h.empty() && h[0] == '?') h.erase(0, 1);
        header.push_back(h);
      }
      continue;
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) row[header[i]] = strip(cells[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

VocabularyMapping parse_mapping(const std::string& text, const std::string& origin) {
  VocabularyMapping m;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::string where = origin + ":" + std::to_string(line_no);
    if (line.rfind("drop-unmapped", 0) == 0) {
      auto eq = line.find('=');
      std::string v = eq == std::string::npos ? "" : trim(line.substr(eq + 1));
      if (v != "true" && v != "false") throw DataError(where + ": drop-unmapped must be true or false");
      m.drop_unmapped = v == "true";
      continue;
    }
    auto arrow = line.find("->");
    auto sp = line.find(' ');
    if (arrow == std::string::npos || sp == std::string::npos || sp > arrow)
      throw DataError(where + ": expected 'type|prop <external> -> <local>'");
    std::string kind = line.substr(0, sp);
    std::string ext = trim(line.substr(sp + 1, arrow - sp - 1));
    std::string local = trim(line.substr(arrow + 2));
    if (ext.empty() || !is_valid_name(local) || is_fresh_name(local))
      throw DataError(where + ": bad mapping entry");
    if (kind == "type")
      m.type_map[ext] = local;
    else if (kind == "prop")
      m.prop_map[ext] = local;
    else
      throw DataError(where + ": unknown mapping kind '" + kind + "'");
  }
  return m;
}

std::vector<KbEntity> match_entities(KbAdapter& adapter, const std::string& individual) {
  std::string key = normalize_label(individual);
  std::vector<KbEntity> out;
  for (auto& e : adapter.lookup_by_name(individual))
    if (std::any_of(e.labels.begin(), e.labels.end(), [&](const auto& l) { return normalize_label(l) == key; }))
      out.push_back(std::move(e));
  return out;
}

std::string value_individual(const std::string& value) {
  std::string out;
  for (char c : trim(value)) out += is_valid_name(std::string(1, c)) ? c : '_';
  if (out.empty()) out = "_";
  // keep clear of the normalization namespace
  if (is_fresh_name(out)) out = "v" + out;
  return out;
}

std::vector<ABoxAxiom> extract_axioms(const KbEntity& entity, const VocabularyMapping& mapping,
                                      const std::string& individual) {
  std::set<ABoxAxiom> out;
  for (const auto& t : entity.types) {
    auto it = mapping.type_map.find(t);
    if (it != mapping.type_map.end())
      out.insert(ClassAssertion{ConceptExpr::atomic(it->second), individual});
    else if (!mapping.drop_unmapped)
      out.insert(ClassAssertion{ConceptExpr::atomic(value_individual(t)), individual});
  }
  for (const auto& [p, v] : entity.properties) {
    auto it = mapping.prop_map.find(p);
    if (it != mapping.prop_map.end())
      out.insert(RoleAssertion{it->second, individual, value_individual(v)});
    else if (!mapping.drop_unmapped)
      out.insert(RoleAssertion{value_individual(p), individual, value_individual(v)});
  }
  return {out.begin(), out.end()};
}

std::set<std::string> all_individuals(const LearningDomain& d) {
  Signature sig;
  for (const auto& lso : d.lsos)
    for (const auto& ax : lso.abox) collect_signature(ax, sig);
  return sig.individuals;
}

ImportResult import_external(LearningDomain& d, const std::set<std::string>& roots, KbAdapter& adapter,
                             const VocabularyMapping& mapping, const std::vector<TBoxAxiom>& constraints,
                             const ImportOptions& options) {
  ImportResult result;
  NormalizedTBox checked = d.tbox;
  extend_normalized(checked, constraints);
  Reasoner reasoner(std::move(checked));

  Signature sig;
  for (const auto& ax : d.tbox_axioms) collect_signature(ax, sig);
  for (const auto& lso : d.lsos)
    for (const auto& ax : lso.abox) collect_signature(ax, sig);

  std::vector<std::size_t> sample(d.lsos.size());
  for (std::size_t i = 0; i < sample.size(); ++i) sample[i] = i;
  if (options.consistency_sample > 0 && options.consistency_sample < sample.size()) {
    std::mt19937_64 rng(options.seed);
    std::shuffle(sample.begin(), sample.end(), rng);
    sample.resize(options.consistency_sample);
    std::sort(sample.begin(), sample.end());
  }

  // first LSO made inconsistent by A_e + K, as "key: witness"; empty when none
  auto first_conflict = [&](const std::vector<ABoxAxiom>& extra) -> std::string {
    for (std::size_t i : sample) {
      std::vector<ABoxAxiom> abox = d.lsos[i].abox;
      abox.insert(abox.end(), extra.begin(), extra.end());
      auto c = reasoner.materialize(abox);
      if (c.inconsistent()) return d.lsos[i].key + ": " + c.inconsistency_witness();
    }
    return {};
  };

  std::vector<ABoxAxiom> accepted;
  for (const auto& ind : roots) {
    if (is_fresh_name(ind)) continue;
    std::vector<KbEntity> matches;
    try {
      matches = match_entities(adapter, ind);
    } catch (const std::exception& e) {
      result.audit.push_back({ind, AuditEntry::Outcome::Error, "", e.what()});
      result.aborted = true;
      result.error = std::string("adapter failure on '") + ind + "': " + e.what();
      result.external_axioms = accepted;
      return result;
    }
    if (matches.empty()) {
      result.audit.push_back({ind, AuditEntry::Outcome::NoMatch, "", ""});
      continue;
    }
    for (const auto& entity : matches) {
      auto k = extract_axioms(entity, mapping, ind);
      std::vector<ABoxAxiom> trial = accepted;
      trial.insert(trial.end(), k.begin(), k.end());
      std::string conflict = first_conflict(trial);
      if (!conflict.empty()) {
        result.audit.push_back({ind, AuditEntry::Outcome::Rejected, entity.id, conflict});
        continue;
      }
      for (const auto& ax : k) {
        if (const auto* ca = std::get_if<ClassAssertion>(&ax)) {
          if (!sig.concepts.count(ca->concept_expr.name())) result.new_names.insert(ca->concept_expr.name());
        } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
          if (!sig.roles.count(ra->role)) result.new_names.insert(ra->role);
        }
      }
      accepted = std::move(trial);
      result.audit.push_back(
          {ind, AuditEntry::Outcome::Accepted, entity.id, std::to_string(k.size()) + " axioms"});
      break;
    }
  }

  std::sort(accepted.begin(), accepted.end());
  accepted.erase(std::unique(accepted.begin(), accepted.end()), accepted.end());
  result.external_axioms = accepted;
  d.external_axioms = accepted;
  materialize_domain(d);
  result.domain_closure = d.domain_closure;
  return result;
}

std::string outcome_name(AuditEntry::Outcome o) {
  switch (o) {
    case AuditEntry::Outcome::Accepted:
      return "accepted";
    case AuditEntry::Outcome::Rejected:
      return "rejected";
    case AuditEntry::Outcome::NoMatch:
      return "no-match";
    case AuditEntry::Outcome::Error:
      return "error";
  }
  return "?";
}

std::string render_audit(const std::vector<AuditEntry>& audit) {
  std::string out = "individual\toutcome\tentity\tdetail\n";
  for (const auto& a : audit)
    out += a.individual + "\t" + outcome_name(a.outcome) + "\t" + a.entity + "\t" + a.detail + "\n";
  return out;
}

}  // namespace tlx
