#include "tlx/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace tlx {

namespace {

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string conjunction(const std::vector<Entailment>& gs) {
  std::string out;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (i) out += i + 1 == gs.size() ? " and " : ", ";
    out += gs[i].to_string();
  }
  return out;
}

std::string stats_tail(const EvidenceResult& e) { return "(γ=" + fixed(e.gamma, 3) + ", ρ=" + fixed(e.rho, 4) + ")"; }

}  // namespace

std::string render_evidence(const EvidenceResult& e, const std::string& src, const std::string& dst,
                            const TransferFacts& facts) {
  const bool positive = e.gamma >= 0;
  const std::string role = positive ? "positively" : "negatively";
  const auto& x = e.evidence;
  auto rate = [&](double ChangeRates::*field, const char* name) {
    return facts.rates ? std::string(" (") + name + "=" + fixed((*facts.rates).*field, 3) + ")" : std::string();
  };
  switch (x.kind) {
    case Evidence::Kind::New:
    case Evidence::Kind::Obs: {
      const bool is_new = x.kind == Evidence::Kind::New;
      std::string label = is_new ? "new" : "obsolete";
      std::string r = is_new ? rate(&ChangeRates::d_new, "d_new") : rate(&ChangeRates::d_obs, "d_obs");
      if (!positive)
        return "There are a high percentage of " + label + " entailments from " + src + " to " + dst + r +
               ", which is negatively associated with transfer success " + stats_tail(e);
      return "The percentage of " + label + " entailments from " + src + " to " + dst + r +
             " is positively associated with transfer success " + stats_tail(e);
    }
    case Evidence::Kind::Inv:
      return "The percentage of shared entailments between " + src + " and " + dst +
             rate(&ChangeRates::d_inv, "d_inv") + " is " + role + " associated with transfer success " +
             stats_tail(e);
    case Evidence::Kind::Narrator:
    case Evidence::Kind::Context: {
      const bool single = x.kind == Evidence::Kind::Narrator;
      std::string what = conjunction(x.entailments);
      std::string verb = single ? " holds" : " hold together";
      if (facts.holds_in_target)
        return what + verb + " in both " + src + " and " + dst + " and " + (single ? "is " : "are ") + role +
               " associated with transfer success " + stats_tail(e);
      return what + verb + " in " + src + " but not in " + dst + "; " + (single ? "its" : "their") +
             " presence in both is " + role + " associated with transfer success " + stats_tail(e);
    }
  }
  return {};
}

std::size_t ExplanationReport::sentence_count() const {
  std::size_t n = 0;
  for (const auto& s : sections) n += s.lines.size();
  return n;
}

ExplanationReport build_report(const EvidenceEngine& engine, const FtiMatrix& fti,
                               const std::vector<EvidenceResult>& results, const ReportQuery& query) {
  ExplanationReport report;
  std::vector<EvidenceResult> valid;
  for (const auto& r : results) (r.valid ? valid : report.appendix).push_back(r);
  sort_by_strength(valid);
  sort_by_strength(report.appendix);

  std::vector<DomainSet> where;
  where.reserve(valid.size());
  for (const auto& r : valid) where.push_back(engine.evidence_domains(r.evidence));

  const auto& domains = engine.domains();
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (!query.source.empty() && domains[i]->id != query.source) continue;
    for (std::size_t j = 0; j < domains.size(); ++j) {
      if (i == j) continue;
      if (!query.target.empty() && domains[j]->id != query.target) continue;
      const TransferRecord* rec = fti.find(domains[i]->id, domains[j]->id);
      if (!rec) continue;
      TransferSection section;
      section.record = *rec;
      std::optional<ChangeRates> rates;
      for (std::size_t k = 0; k < valid.size(); ++k) {
        if (query.limit && section.lines.size() >= query.limit) break;
        TransferFacts facts;
        if (valid[k].evidence.is_general()) {
          if (!rates) rates = change_rates(domains[i]->domain_closure, domains[j]->domain_closure);
          facts.rates = rates;
        } else {
          if (!where[k].test(i)) continue;
          facts.holds_in_target = where[k].test(j);
        }
        section.lines.push_back({valid[k], render_evidence(valid[k], domains[i]->id, domains[j]->id, facts)});
      }
      report.sections.push_back(std::move(section));
    }
  }
  return report;
}

std::string render_text(const ExplanationReport& report) {
  std::ostringstream out;
  out << "Transfer explanation report\n";
  for (const auto& [k, v] : report.meta) out << "  " << k << ": " << v << '\n';
  for (const auto& s : report.sections) {
    const auto& r = s.record;
    out << "\n== " << r.source << " -> " << r.target << "  (fti " << fixed(r.fti, 4) << ", auc base "
        << fixed(r.auc_base, 3) << " hard " << fixed(r.auc_hard, 3) << " soft " << fixed(r.auc_soft, 3) << ")\n";
    if (s.lines.empty()) out << "  no valid evidence applies\n";
    for (const auto& l : s.lines) out << "  - " << l.sentence << '\n';
  }
  out << "\nAppendix: evidence not retained\n";
  out << evidence_table(report.appendix);
  return out.str();
}

std::string render_json(const ExplanationReport& report) {
  using nlohmann::json;
  auto result_json = [](const EvidenceResult& r) {
    json j{{"kind", r.evidence.kind_name()}, {"evidence", r.evidence.to_string()}, {"gamma", r.gamma},
           {"rho", r.rho},   {"n", r.n},                              {"valid", r.valid}};
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
  };
  json meta = json::object();
  for (const auto& [k, v] : report.meta) meta[k] = v;
  json sections = json::array();
  for (const auto& s : report.sections) {
    json lines = json::array();
    for (const auto& l : s.lines) {
      json j = result_json(l.result);
      j["sentence"] = l.sentence;
      lines.push_back(std::move(j));
    }
    const auto& r = s.record;
    sections.push_back({{"source", r.source},
                        {"target", r.target},
                        {"auc_base", r.auc_base},
                        {"auc_hard", r.auc_hard},
                        {"auc_soft", r.auc_soft},
                        {"fsi", r.fsi},
                        {"fgi", r.fgi},
                        {"fti", r.fti},
                        {"evidence", std::move(lines)}});
  }
  json appendix = json::array();
  for (const auto& r : report.appendix) appendix.push_back(result_json(r));
  json doc{{"meta", std::move(meta)}, {"transfers", std::move(sections)}, {"appendix", std::move(appendix)}};
  return doc.dump(2) + "\n";
}

}  // namespace tlx
