#include <doctest.h>

#include <algorithm>
#include <thread>

#include <httplib.h>

#include "helpers.hpp"
#include "tlx/kb.hpp"
#include "tlx/mining.hpp"
#include "tlx/reasoner.hpp"

using namespace tlx;
using test::make_domain;

namespace {

const char* kKb =
    "wd:LAX_song\tLAX|LAX (song)\tSong|MusicalWork\tperformer=Leanne_Scott\n"
    "wd:LAX_airport\tLos Angeles International Airport|LAX\tAirport\tlocatedIn=CA;hasLat=38.94\n"
    "wd:AA\tAA|American Airlines\tCarrier\thasHub=DFW\n";

const char* kMapping =
    "type Airport -> Airport\ntype Song -> Song\ntype Carrier -> Carrier\n"
    "prop locatedIn -> locatedIn\nprop hasLat -> hasLat\nprop hasHub -> hasHub\n";

const char* kTbox = "SubClassOf(Airport Location)\nSubClassOf(Departure Dep)\n";

std::vector<TBoxAxiom> song_constraint() { return parse_ontology("SubClassOf(And(Location Song) Bottom)\n").tbox; }

LearningDomain lax_domain() {
  return make_domain("X", kTbox, "DelayedDep(d)",
                     {"ClassAssert(Departure d)\nRoleAssert(hasOri d LAX)\nClassAssert(Airport LAX)\n"
                      "RoleAssert(hasCarrier d AA)\n",
                      "ClassAssert(Departure d)\nRoleAssert(hasOri d LAX)\nClassAssert(Airport LAX)\n"});
}

std::vector<std::string> ids(const std::vector<KbEntity>& es) {
  std::vector<std::string> out;
  for (const auto& e : es) out.push_back(e.id);
  return out;
}

}  // namespace

TEST_CASE("label normalization") {
  CHECK(normalize_label("  Los_Angeles-International  Airport ") == "los angeles international airport");
  CHECK(normalize_label("LAX") == "lax");
}

TEST_CASE("file kb parsing and lookup") {
  auto kb = FileKb::from_text(std::string("# comment\n\n") + kKb);
  CHECK(kb.entities().size() == 3);
  CHECK(ids(match_entities(kb, "LAX")) == std::vector<std::string>{"wd:LAX_song", "wd:LAX_airport"});
  CHECK(ids(match_entities(kb, "Los_Angeles_International_Airport")) == std::vector<std::string>{"wd:LAX_airport"});
  CHECK(match_entities(kb, "JFK").empty());
  CHECK_THROWS_AS(kb.describe("wd:none"), DataError);
  CHECK_THROWS_AS(FileKb::from_text("only-id\n"), DataError);
  CHECK_THROWS_AS(FileKb::from_text("a\tA\tT\tbroken\n"), DataError);
  CHECK_THROWS_AS(FileKb::from_text("a\tA\na\tB\n"), DataError);
}

TEST_CASE("mapping syntax") {
  auto m = parse_mapping(std::string(kMapping) + "drop-unmapped = false # keep\n");
  CHECK(m.type_map.at("Airport") == "Airport");
  CHECK(m.prop_map.at("hasLat") == "hasLat");
  CHECK_FALSE(m.drop_unmapped);
  CHECK_THROWS_AS(parse_mapping("type Airport Airport\n"), DataError);
  CHECK_THROWS_AS(parse_mapping("kind A -> B\n"), DataError);
  CHECK_THROWS_AS(parse_mapping("drop-unmapped = maybe\n"), DataError);
}

TEST_CASE("axiom extraction") {
  auto kb = FileKb::from_text(kKb);
  auto m = parse_mapping(kMapping);
  auto airport = extract_axioms(kb.describe("wd:LAX_airport"), m, "LAX");
  std::vector<std::string> text;
  for (const auto& a : airport) text.push_back(to_string(a));
  CHECK(std::count(text.begin(), text.end(), "RoleAssert(hasLat LAX 38.94)") == 1);
  CHECK(std::count(text.begin(), text.end(), "ClassAssert(Airport LAX)") == 1);

  auto song = extract_axioms(kb.describe("wd:LAX_song"), m, "LAX");
  REQUIRE(song.size() == 1);
  CHECK(to_string(song[0]) == "ClassAssert(Song LAX)");

  KbEntity bare{"e", {"x"}, {"Unknown"}, {{"foo", "bar"}}};
  CHECK(extract_axioms(bare, m, "x").empty());
  VocabularyMapping keep;
  keep.drop_unmapped = false;
  CHECK(extract_axioms(bare, keep, "x").size() == 2);
}

TEST_CASE("the song reading of LAX is rejected and the airport accepted") {
  auto d = lax_domain();
  auto kb = FileKb::from_text(kKb);
  auto r = import_external(d, {"AA", "LAX", "d"}, kb, parse_mapping(kMapping), song_constraint());
  REQUIRE_FALSE(r.aborted);
  std::vector<std::string> audit;
  for (const auto& a : r.audit) audit.push_back(a.individual + " " + outcome_name(a.outcome) + " " + a.entity);
  CHECK(audit == std::vector<std::string>{"AA accepted wd:AA", "LAX rejected wd:LAX_song",
                                          "LAX accepted wd:LAX_airport", "d no-match "});
  CHECK(d.inconsistent_lsos.empty());
  CHECK(std::binary_search(d.domain_closure.begin(), d.domain_closure.end(), Entailment::parse("hasLat(LAX,38.94)")));
  CHECK(std::binary_search(d.domain_closure.begin(), d.domain_closure.end(), Entailment::parse("locatedIn(LAX,CA)")));
  CHECK_FALSE(std::binary_search(d.domain_closure.begin(), d.domain_closure.end(), Entailment::parse("Song(LAX)")));
  CHECK(r.new_names.count("hasLat"));
  for (std::size_t i = 0; i < d.lsos.size(); ++i) {
    auto abox = d.lsos[i].abox;
    abox.insert(abox.end(), r.external_axioms.begin(), r.external_axioms.end());
    CHECK(is_consistent(d.tbox, abox, song_constraint()));
  }
}

TEST_CASE("airport listed first is accepted without trying the song") {
  auto d = lax_domain();
  auto kb = FileKb::from_text("wd:LAX_airport\tLAX\tAirport\tlocatedIn=CA\nwd:LAX_song\tLAX\tSong\t\n");
  auto r = import_external(d, {"LAX"}, kb, parse_mapping(kMapping), song_constraint());
  REQUIRE(r.audit.size() == 1);
  CHECK(r.audit[0].entity == "wd:LAX_airport");
  CHECK(r.audit[0].outcome == AuditEntry::Outcome::Accepted);
}

TEST_CASE("empty roots import nothing") {
  auto d = lax_domain();
  auto before = d.domain_closure;
  auto kb = FileKb::from_text(kKb);
  auto r = import_external(d, {}, kb, parse_mapping(kMapping), song_constraint());
  CHECK(r.external_axioms.empty());
  CHECK(d.domain_closure == before);
}

TEST_CASE("import is deterministic and root gating imports no more than all individuals") {
  const Corpus& c = test::mini_flights();
  auto kb = FileKb::load(c.kb_path);
  auto mapping = parse_mapping(read_file(c.mapping_path));
  for (const auto& src : c.domains) {
    auto roots = mine_roots(src, MiningParams{}).root_individuals;
    auto d1 = src, d2 = src, d3 = src;
    auto a = import_external(d1, roots, kb, mapping, c.constraints);
    auto b = import_external(d2, roots, kb, mapping, c.constraints);
    CHECK(a.external_axioms == b.external_axioms);
    CHECK(render_audit(a.audit) == render_audit(b.audit));
    auto all = import_external(d3, all_individuals(src), kb, mapping, c.constraints);
    INFO(src.id);
    CHECK(a.external_axioms.size() <= all.external_axioms.size());
    CHECK(d1.inconsistent_lsos.empty());
    CHECK(d3.inconsistent_lsos.empty());
  }
}

TEST_CASE("bindings tables") {
  auto rows = parse_bindings("?entity\t?label\n<wd:X>\t\"Los Angeles\"\r\n\nwd:Y\tY\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].at("entity") == "wd:X");
  CHECK(rows[0].at("label") == "Los Angeles");
  CHECK(rows[1].at("entity") == "wd:Y");
}

namespace {

// Serves a FileKb snapshot over the lookup/describe protocol.
class KbServer {
 public:
  explicit KbServer(FileKb kb) : kb_(std::move(kb)) {
    server_.Get("/lookup", [this](const httplib::Request& req, httplib::Response& res) {
      std::string body = "?entity\n";
      for (const auto& e : kb_.lookup_by_name(req.get_param_value("label"))) body += "<" + e.id + ">\n";
      res.set_content(body, "text/tab-separated-values");
    });
    server_.Get("/describe", [this](const httplib::Request& req, httplib::Response& res) {
      auto e = kb_.describe(req.get_param_value("id"));
      std::string body = "?p\t?o\n";
      for (const auto& l : e.labels) body += "label\t\"" + l + "\"\n";
      for (const auto& t : e.types) body += "type\t" + t + "\n";
      for (const auto& [p, v] : e.properties) body += p + "\t" + v + "\n";
      res.set_content(body, "text/tab-separated-values");
    });
    server_.Get("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 503; });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~KbServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  FileKb kb_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_CASE("http adapter agrees with the file adapter") {
  KbServer server(FileKb::from_text(kKb));
  HttpKbConfig cfg;
  cfg.endpoint = server.endpoint();
  HttpKb http(cfg);
  auto file = FileKb::from_text(kKb);
  CHECK(ids(match_entities(http, "LAX")) == ids(match_entities(file, "LAX")));
  auto e = http.describe("wd:LAX_airport");
  CHECK(e.labels == file.describe("wd:LAX_airport").labels);
  CHECK(e.types == file.describe("wd:LAX_airport").types);
  CHECK(e.properties == file.describe("wd:LAX_airport").properties);

  auto d1 = lax_domain(), d2 = lax_domain();
  auto m = parse_mapping(kMapping);
  auto a = import_external(d1, {"AA", "LAX"}, http, m, song_constraint());
  auto b = import_external(d2, {"AA", "LAX"}, file, m, song_constraint());
  CHECK(a.external_axioms == b.external_axioms);
  CHECK(render_audit(a.audit) == render_audit(b.audit));
}

TEST_CASE("transport failures abort the import with an audit entry") {
  KbServer server(FileKb::from_text(kKb));
  HttpKbConfig cfg;
  cfg.endpoint = server.endpoint();
  cfg.label_query = "/broken?label={label}";
  cfg.retries = 1;
  HttpKb http(cfg);
  CHECK_THROWS_AS(http.lookup_by_name("LAX"), TransportError);
  auto d = lax_domain();
  auto r = import_external(d, {"LAX"}, http, parse_mapping(kMapping), song_constraint());
  CHECK(r.aborted);
  REQUIRE(r.audit.size() == 1);
  CHECK(r.audit[0].outcome == AuditEntry::Outcome::Error);

  HttpKbConfig dead;
  dead.endpoint = "http://127.0.0.1:1";
  dead.retries = 0;
  dead.timeout_seconds = 1;
  HttpKb nobody(dead);
  CHECK_THROWS_AS(nobody.lookup_by_name("LAX"), TransportError);
}
