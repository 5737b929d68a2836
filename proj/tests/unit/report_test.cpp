#include <doctest.h>

#include "helpers.hpp"
#include "tlx/report.hpp"

using namespace tlx;

namespace {

EvidenceResult result(Evidence x, double gamma, double rho = 0.001) {
  EvidenceResult r;
  r.evidence = std::move(x);
  r.gamma = gamma;
  r.rho = rho;
  r.n = 30;
  r.valid = true;
  return r;
}

Entailment E(const char* s) { return Entailment::parse(s); }

}  // namespace

TEST_CASE("general factor sentences") {
  TransferFacts facts;
  facts.rates = ChangeRates{0.4, 0.9, 0.05};
  auto obs = render_evidence(result(Evidence::general(Evidence::Kind::Obs), -0.62), "A", "B", facts);
  CHECK(obs ==
        "There are a high percentage of obsolete entailments from A to B (d_obs=0.900), which is negatively "
        "associated with transfer success (γ=-0.620, ρ=0.0010)");
  auto nw = render_evidence(result(Evidence::general(Evidence::Kind::New), -0.3), "A", "B");
  CHECK(nw.find("high percentage of new entailments from A to B,") == 12);
  auto pos = render_evidence(result(Evidence::general(Evidence::Kind::New), 0.3), "A", "B");
  CHECK(pos.rfind("The percentage of new entailments from A to B is positively associated", 0) == 0);
  auto inv = render_evidence(result(Evidence::general(Evidence::Kind::Inv), 0.07, 0.01), "A", "B", facts);
  CHECK(inv ==
        "The percentage of shared entailments between A and B (d_inv=0.050) is positively associated with "
        "transfer success (γ=0.070, ρ=0.0100)");
}

TEST_CASE("narrator and context sentences") {
  auto n = render_evidence(result(Evidence::narrator(E("locatedIn(ori,East)")), 0.41), "A", "B");
  CHECK(n ==
        "locatedIn(ori,East) holds in both A and B and is positively associated with transfer success "
        "(γ=0.410, ρ=0.0010)");
  TransferFacts absent;
  absent.holds_in_target = false;
  auto n2 = render_evidence(result(Evidence::narrator(E("locatedIn(ori,East)")), 0.41), "A", "B", absent);
  CHECK(n2 ==
        "locatedIn(ori,East) holds in A but not in B; its presence in both is positively associated with "
        "transfer success (γ=0.410, ρ=0.0010)");
  auto c = render_evidence(result(Evidence::context({E("hasOri(dep,ORD)"), E("locatedIn(des,CA)")}), -0.35), "A", "B");
  CHECK(c ==
        "hasOri(dep,ORD) and locatedIn(des,CA) hold together in both A and B and are negatively associated with "
        "transfer success (γ=-0.350, ρ=0.0010)");
  auto c3 = render_evidence(
      result(Evidence::context({E("BigCar(car)"), E("ListCar(car)"), E("locatedIn(des,CA)")}), 0.35), "A", "B",
      absent);
  CHECK(c3.rfind("BigCar(car), ListCar(car) and locatedIn(des,CA) hold together in A but not in B; their", 0) == 0);
}

namespace {

struct Built {
  EvidenceEngine engine{test::ptrs(test::mini_flights()), test::mini_flights_fti()};
  std::vector<EvidenceResult> results;
  Built() {
    results = engine.general_factors();
    auto n = engine.narrators();
    results.insert(results.end(), n.begin(), n.end());
    SearchConfig cfg;
    cfg.expand = false;
    cfg.max_dim = 3;
    core_context_search(engine, cfg, [&](const ContextRecord& r) { results.push_back(r.result); });
  }
};

// Valid results that apply to the transfer src -> dst, counted directly.
std::size_t applicable(const Built& b, std::size_t src, std::size_t dst) {
  std::size_t n = 0;
  for (const auto& r : b.results) {
    if (!r.valid) continue;
    if (r.evidence.is_general() || b.engine.evidence_domains(r.evidence).test(src)) ++n;
  }
  (void)dst;
  return n;
}

}  // namespace

TEST_CASE("report completeness") {
  Built b;
  auto rep = build_report(b.engine, test::mini_flights_fti(), b.results, {});
  CHECK(rep.sections.size() == 56);
  std::size_t want = 0;
  const auto& ds = b.engine.domains();
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j)
      if (i != j) want += applicable(b, i, j);
  CHECK(rep.sentence_count() == want);
  for (const auto& s : rep.sections)
    for (const auto& l : s.lines) CHECK(l.result.valid);
  for (const auto& r : rep.appendix) CHECK_FALSE(r.valid);
  std::size_t valid = 0;
  for (const auto& r : b.results) valid += r.valid;
  CHECK(valid + rep.appendix.size() == b.results.size());
}

TEST_CASE("report queries select transfers and cap sentences") {
  Built b;
  auto one = build_report(b.engine, test::mini_flights_fti(), b.results, {"ATL-LAX", "BOS-MSP", 0});
  REQUIRE(one.sections.size() == 1);
  CHECK(one.sections[0].record.source == "ATL-LAX");
  CHECK(one.sentence_count() == applicable(b, 0, 1));
  auto from = build_report(b.engine, test::mini_flights_fti(), b.results, {"ATL-LAX", "", 2});
  CHECK(from.sections.size() == 7);
  for (const auto& s : from.sections) CHECK(s.lines.size() <= 2);
  auto none = build_report(b.engine, test::mini_flights_fti(), b.results, {"nowhere", "", 0});
  CHECK(none.sections.empty());
}

TEST_CASE("sentences come strongest first") {
  Built b;
  auto rep = build_report(b.engine, test::mini_flights_fti(), b.results, {"DFW-MIA", "MIA-ATL", 0});
  REQUIRE(rep.sections.size() == 1);
  const auto& lines = rep.sections[0].lines;
  REQUIRE(lines.size() > 3);
  for (std::size_t k = 1; k < lines.size(); ++k)
    CHECK(std::abs(lines[k - 1].result.gamma) >= std::abs(lines[k].result.gamma));
}

TEST_CASE("text and json renderings") {
  Built b;
  auto rep = build_report(b.engine, test::mini_flights_fti(), b.results, {"ATL-LAX", "LAX-DFW", 3});
  rep.meta = {{"corpus", "mini"}};
  auto text = render_text(rep);
  CHECK(text.find("== ATL-LAX -> LAX-DFW") != std::string::npos);
  CHECK(text.find("Appendix: evidence not retained\nkind\tevidence\tgamma\trho\tn\tvalid\n") != std::string::npos);
  auto json = render_json(rep);
  CHECK(json.find("\"transfers\"") != std::string::npos);
  CHECK(json.find("\"sentence\"") != std::string::npos);
  CHECK(json.find("\"corpus\": \"mini\"") != std::string::npos);
}
