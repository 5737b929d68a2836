#include "tlx/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "tlx/kv.hpp"
#include "tlx/transfer.hpp"

namespace fs = std::filesystem;

namespace tlx {

namespace {

struct AirportInfo {
  const char* code;
  const char* name;
  const char* state;
  const char* city;
};

constexpr AirportInfo kNorth[] = {
    {"ORD", "Chicago O'Hare International", "IL", "Chicago"},
    {"BOS", "Boston Logan International", "MA", "Boston"},
    {"MSP", "Minneapolis Saint Paul International", "MN", "Minneapolis"},
    {"DTW", "Detroit Metropolitan Wayne County", "MI", "Detroit"},
    {"BUF", "Buffalo Niagara International", "NY", "Buffalo"},
    {"DEN", "Denver International", "CO", "Denver"},
};

constexpr AirportInfo kSouth[] = {
    {"ATL", "Hartsfield Jackson Atlanta International", "GA", "Atlanta"},
    {"LAX", "Los Angeles International", "CA", "LA"},
    {"DFW", "Dallas Fort Worth International", "TX", "Dallas"},
    {"MIA", "Miami International", "FL", "Miami"},
    {"PHX", "Phoenix Sky Harbor International", "AZ", "Phoenix"},
    {"IAH", "Houston George Bush Intercontinental", "TX", "Houston"},
};

struct CarrierInfo {
  const char* code;
  const char* name;
  const char* hub;
};

constexpr CarrierInfo kCarriers[] = {
    {"DL", "Delta Air Lines", "ATL"}, {"AA", "American Airlines", "DFW"}, {"UA", "United Airlines", "ORD"},
    {"WN", "Southwest Airlines", "PHX"}, {"B6", "JetBlue Airways", "BOS"}, {"AS", "Alaska Airlines", "LAX"},
};

const char* kTbox = R"(SubClassOf(Departure Dep)
SubClassOf(HeavySnow SnowRisk)
SubClassOf(LightSnow SnowRisk)
SubClassOf(And(Dep Some(hasOri NorthernAirport)) NorthernDep)
SubClassOf(And(Dep Some(hasWea SnowRisk)) WinterOps)
SubClassOf(Some(hasRunway IcyRunway) DeicingDep)
SubClassOf(Some(hasTraffic HighTraffic) CongestedDep)
SubClassOf(And(Dep Some(hasOri HubAirport) Some(hasTraffic HighTraffic)) SlotControlled)
SubClassOf(Airport Location)
RoleChain(hasCarrier hasHub hasDepHub)
)";

const char* kConstraints = "SubClassOf(And(Location Song) Bottom)\n";

const char* kMapping = R"(# external vocabulary -> corpus vocabulary
type Airport -> Airport
type Song -> Song
type Carrier -> Carrier
prop locatedIn -> locatedIn
prop serveCity -> serveCity
prop hasHub -> hasHub
prop performer -> performer
drop-unmapped = true
)";

std::string date_string(int day) {
  static constexpr int kMonth[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int year = 2019, m = 0;
  while (day >= kMonth[m]) {
    day -= kMonth[m];
    if (++m == 12) {
      m = 0;
      ++year;
    }
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02d/%02d/%04d", m + 1, day + 1, year);
  return buf;
}

template <class T, std::size_t N>
const T& pick(const T (&items)[N], std::mt19937_64& rng) {
  return items[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

struct Weighted {
  const char* name;
  double weight;
};

const char* draw(const std::vector<Weighted>& items, std::mt19937_64& rng) {
  std::vector<double> w;
  for (const auto& i : items) w.push_back(i.weight);
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  return items[dist(rng)].name;
}

std::string kb_text() {
  std::ostringstream out;
  out << "# entity\tlabels\ttypes\tproperties\n";
  // the song shares the airport's code and is listed first
  out << "wd:LAX_song\tLAX|LAX (song)\tSong|MusicalWork\tperformer=The_Game\n";
  auto airport = [&](const AirportInfo& a) {
    out << "wd:" << a.code << "_airport\t" << a.code << '|' << a.name << "\tAirport|Infrastructure\tlocatedIn="
        << a.state << ";serveCity=" << a.city << ";iataCode=" << a.code << '\n';
  };
  for (const auto& a : kNorth) airport(a);
  for (const auto& a : kSouth) airport(a);
  for (const auto& c : kCarriers)
    out << "wd:" << c.code << "_carrier\t" << c.code << '|' << c.name << "\tCarrier|Company\thasHub=" << c.hub
        << '\n';
  return out.str();
}

struct Route {
  const AirportInfo* ori;
  const AirportInfo* des;
  char regime;
};

std::vector<Route> routes(std::size_t n) {
  constexpr std::size_t kn = std::size(kNorth), ks = std::size(kSouth);
  // the first eight reproduce the bundled corpus
  static const std::pair<int, int> kFirstNorth[] = {{0, 1}, {2, 3}, {1, 2}, {3, 0}};
  static const std::pair<int, int> kFirstSouth[] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  std::vector<Route> out;
  std::size_t w = 0, c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 0) {
      if (w < 4) {
        out.push_back({&kNorth[kFirstNorth[w].first], &kNorth[kFirstNorth[w].second], 'W'});
      } else {
        std::size_t a = w % kn, b = (w + 1 + w / kn) % kn;
        if (a == b) b = (b + 1) % kn;
        out.push_back({&kNorth[a], &kNorth[b], 'W'});
      }
      ++w;
    } else {
      if (c < 4) {
        out.push_back({&kSouth[kFirstSouth[c].first], &kSouth[kFirstSouth[c].second], 'C'});
      } else {
        std::size_t a = c % ks, b = (c + 1 + c / ks) % ks;
        if (a == b) b = (b + 1) % ks;
        out.push_back({&kSouth[a], &kSouth[b], 'C'});
      }
      ++c;
    }
  }
  return out;
}

}  // namespace

SynthCorpus write_synthetic_corpus(const std::string& dir, const SynthConfig& cfg) {
  if (cfg.domains < 2) throw std::invalid_argument("need at least two domains");
  if (cfg.min_lsos < 10 || cfg.max_lsos < cfg.min_lsos) throw std::invalid_argument("bad LSO count range");
  std::mt19937_64 rng(cfg.seed);
  SynthCorpus corpus;
  corpus.planted_context = {"NorthernDep(d)", "SnowRisk(wea)"};

  std::vector<Route> plan = routes(cfg.domains);
  std::set<std::string> used;
  std::ostringstream manifest;
  manifest << "# synthetic flight-delay corpus\n";
  int congestion_seen = 0;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const Route& r = plan[i];
    std::string id = std::string(r.ori->code) + "-" + r.des->code;
    for (int k = 2; used.count(id); ++k) id = std::string(r.ori->code) + "-" + r.des->code + "-" + std::to_string(k);
    used.insert(id);

    // the first congestion route carries a few northern departures, the second a few snow days
    bool extra_northern = false, extra_snow = false;
    if (r.regime == 'C') {
      extra_northern = congestion_seen == 0;
      extra_snow = congestion_seen == 1;
      ++congestion_seen;
    }

    std::size_t count = std::uniform_int_distribution<std::size_t>(cfg.min_lsos, cfg.max_lsos)(rng);
    SynthDomain info{id, r.regime, r.ori->code, r.des->code, count};
    fs::path ddir = fs::path(dir) / id;
    write_file((ddir / "tbox.onto").string(), kTbox);
    write_file((ddir / "domain.manifest").string(),
               "id = " + id +
                   "\ntarget = DelayedDep(d)\ntbox = tbox.onto\nannotation_schema = fid, dat, car, ori, des\nkey = "
                   "fid\nlso_dir = lsos\n");

    const CarrierInfo* carriers[2] = {&pick(kCarriers, rng), &pick(kCarriers, rng)};
    for (std::size_t k = 0; k < count; ++k) {
      const bool w = r.regime == 'W';
      const CarrierInfo& car = *carriers[k % 2];
      std::ostringstream o;
      char fid[32];
      std::snprintf(fid, sizeof fid, "f%04zu", k);
      o << "#@ann fid = " << fid << "\n#@ann dat = " << date_string(static_cast<int>(k)) << "\n#@ann car = "
        << car.code << "\n#@ann ori = " << r.ori->code << "\n#@ann des = " << r.des->code << '\n';
      o << "#@val load = " << format_double(std::round(std::uniform_real_distribution<>(0.3, 1.0)(rng) * 100) / 100)
        << '\n';
      o << "ClassAssert(Departure d)\nRoleAssert(hasOri d " << r.ori->code << ")\nRoleAssert(hasDes d "
        << r.des->code << ")\nClassAssert(Airport " << r.ori->code << ")\nClassAssert(Airport " << r.des->code
        << ")\nRoleAssert(hasCarrier d " << car.code << ")\nClassAssert(Carrier " << car.code << ")\n";
      o << "ClassAssert(" << (w ? "NorthernAirport " : "HubAirport ") << r.ori->code << ")\n";

      const char* weather;
      if (w) {
        weather = draw({{"HeavySnow", 0.2}, {"LightSnow", 0.15}, {"Fog", 0.1}, {"Rain", 0.2}, {"Clear", 0.35}}, rng);
      } else {
        weather = draw({{"Rain", 0.3}, {"Clear", 0.55}, {"Haze", 0.15}}, rng);
        if (extra_snow && k % 12 == 5) weather = "LightSnow";
      }
      o << "RoleAssert(hasWea d wea)\nClassAssert(" << weather << " wea)\n";
      const bool snowy = std::string(weather).find("Snow") != std::string::npos;
      if (w && snowy) o << "RoleAssert(hasRunway d rwy)\nClassAssert(IcyRunway rwy)\n";

      bool busy = false;
      if (!w) {
        const char* traffic = draw({{"HighTraffic", 0.4}, {"ModerateTraffic", 0.25}, {"LowTraffic", 0.35}}, rng);
        o << "RoleAssert(hasTraffic d tr)\nClassAssert(" << traffic << " tr)\n";
        busy = std::string(traffic) == "HighTraffic";
        o << "RoleAssert(hasSlot d s" << std::uniform_int_distribution<int>(0, 5)(rng) << ")\n";
        if (busy && std::bernoulli_distribution(0.5)(rng)) o << "ClassAssert(GroundDelayProgram d)\n";
      }
      if (extra_northern && k % 10 == 3) o << "ClassAssert(NorthernDep d)\n";

      static constexpr const char* kNorthFleet[] = {"CRJ9", "E175", "A320"};
      static constexpr const char* kSouthFleet[] = {"B737", "A321", "B757", "A320"};
      o << "RoleAssert(hasAircraft d " << (w ? pick(kNorthFleet, rng) : pick(kSouthFleet, rng)) << ")\n";
      o << "RoleAssert(hasGate d " << (w ? "gN" : "gS") << std::uniform_int_distribution<int>(0, 5)(rng) << ")\n";
      o << "RoleAssert(hasCrew d c" << std::uniform_int_distribution<int>(0, 11)(rng) << ")\n";
      o << "RoleAssert(hasStand d st" << std::uniform_int_distribution<int>(0, 9)(rng) << ")\n";
      const CarrierInfo& prev = pick(kCarriers, rng);
      o << "RoleAssert(hasRecDep d d1)\nRoleAssert(hasCarrier d1 " << prev.code << ")\n";

      const bool cause = w ? (snowy || std::string(weather) == "Fog") : busy;
      const bool delayed = std::bernoulli_distribution(cfg.label_noise)(rng) ? !cause : cause;
      if (delayed) o << "ClassAssert(DelayedDep d)\n";
      write_file((ddir / "lsos" / (std::string(fid) + ".onto")).string(), o.str());
    }
    manifest << "domain = " << id << '\n';
    corpus.domains.push_back(info);
  }
  manifest << "constraints = constraints.onto\nkb = kb.tsv\nmapping = mapping.txt\n";
  write_file((fs::path(dir) / "corpus.manifest").string(), manifest.str());
  write_file((fs::path(dir) / "constraints.onto").string(), kConstraints);
  write_file((fs::path(dir) / "kb.tsv").string(), kb_text());
  write_file((fs::path(dir) / "mapping.txt").string(), kMapping);
  std::sort(corpus.domains.begin(), corpus.domains.end(),
            [](const SynthDomain& a, const SynthDomain& b) { return a.id < b.id; });
  return corpus;
}

std::string synthetic_auc_csv(const SynthCorpus& corpus, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0, 0.02);
  FtiMatrix m;
  for (const auto& s : corpus.domains)
    for (const auto& t : corpus.domains) {
      if (s.id == t.id) continue;
      TransferRecord r;
      r.source = s.id;
      r.target = t.id;
      const bool same = s.regime == t.regime;
      r.auc_base = std::clamp(0.82 + jitter(rng), 0.0, 1.0);
      r.auc_hard = std::clamp(r.auc_base + (same ? 0.0 : -0.15) + jitter(rng), 0.0, 1.0);
      r.auc_soft = std::clamp(r.auc_base + (same ? 0.02 : -0.03) + jitter(rng), 0.0, 1.0);
      m.records[{s.id, t.id}] = r;
    }
  return write_auc_csv(m);
}

}  // namespace tlx
