#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "v2vlab/app_registry.hpp"
#include "v2vlab/errors.hpp"
#include "v2vlab/text.hpp"

using namespace v2vlab;

namespace {

const AppRequirement& app(std::string_view id) {
  const AppRequirement* a = find_app(builtin_registry(), id);
  REQUIRE_MESSAGE(a != nullptr, id);
  return *a;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("v2vlab_registry_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("registry holds 26 uniquely named applications") {
  const auto& reg = builtin_registry();
  CHECK(reg.size() == 26);
  std::set<std::string> ids;
  for (const auto& a : reg) {
    ids.insert(a.id);
    CHECK_NOTHROW(a.validate());
    CHECK_FALSE(a.links.empty());
  }
  CHECK(ids.size() == 26);

  int per_category[4] = {};
  for (const auto& a : reg) ++per_category[static_cast<int>(a.category)];
  CHECK(per_category[0] == 8);
  CHECK(per_category[1] == 5);
  CHECK(per_category[2] == 5);
  CHECK(per_category[3] == 8);
}

TEST_CASE("spot checks of encoded requirements") {
  const auto& pcs = app("PCS");
  CHECK(pcs.range.kind == RangeSpec::Kind::kFixed);
  CHECK(pcs.range.lower_m == 50.0);
  CHECK(pcs.frequency.periodic_hz == 50.0);
  CHECK(pcs.latency.kind == LatencySpec::Kind::kBounded);
  CHECK(pcs.latency.lower_ms == 20.0);

  const auto& lez = app("LEZ");
  CHECK(lez.range.kind == RangeSpec::Kind::kAtLeast);
  CHECK(lez.range.lower_m == 1000.0);
  CHECK(lez.frequency.bound == FrequencySpec::Bound::kAtMost);
  CHECK(lez.frequency.example_hz == 0.1);
  CHECK(lez.latency.kind == LatencySpec::Kind::kAtLeast);
  CHECK(lez.latency.lower_ms == 10000.0);
  CHECK_FALSE(lez.has_v2v_link());
  CHECK(lez.has_cloud_link());

  const auto& pfo = app("PFO");
  CHECK(pfo.range.kind == RangeSpec::Kind::kInterval);
  CHECK(pfo.range.upper_m == 13000.0);
  CHECK(pfo.latency.kind == LatencySpec::Kind::kDistanceDependent);
  CHECK(pfo.links.size() == 5);

  const auto& rvc = app("RVC");
  CHECK(rvc.frequency.event_driven);
  CHECK_FALSE(rvc.frequency.is_periodic());
  CHECK(rvc.latency.lower_ms == 5000.0);

  const auto& cdpa = app("CDPA");
  CHECK(cdpa.latency.kind == LatencySpec::Kind::kInterval);
  CHECK(cdpa.latency.lower_ms == 300000.0);
  CHECK(cdpa.latency.upper_ms == 600000.0);
  CHECK(cdpa.latency.best_effort_fallback);

  const auto& ap = app("AP");
  CHECK(ap.range.open_upper);
  CHECK(std::count_if(ap.links.begin(), ap.links.end(),
                      [](const CommLink& l) { return l.involves(Endpoint::kSensor); }) == 1);
}

TEST_CASE("link notation") {
  const auto links = parse_links("C/I/V2V");
  REQUIRE(links.size() == 3);
  CHECK(links[0].to_string() == "C2V");
  CHECK(links[1].to_string() == "I2V");
  CHECK(links[2].to_string() == "V2V");
  CHECK(parse_links("V2C2V")[0].hops.size() == 3);
  CHECK_FALSE(parse_links("V2C2V")[0].is_v2v_class());
  CHECK(parse_links("I2V")[0].is_v2v_class());
  CHECK_FALSE(parse_links("I2I")[0].is_v2v_class());
  CHECK(parse_links("V2Sensor")[0].involves(Endpoint::kSensor));
  CHECK_THROWS_AS(parse_links("V2X"), ValidationError);
  CHECK_THROWS_AS(parse_links(""), ValidationError);
}

TEST_CASE("demanding-end paradigms under default thresholds") {
  const std::vector<std::string> v2v = {"PCS", "EBL",  "CCW", "LTA",  "LCW", "TSV", "SSV",
                                        "Stop-start", "Platoon", "AVT", "CFEM", "TJA", "SCLC", "ESS"};
  const std::vector<std::string> both = {"CSW", "FEP", "PFO", "AP", "CSS", "GPA"};
  const std::vector<std::string> cellular = {"LEZ", "RVS", "RVC", "RTCS", "DID", "CDPA"};
  CHECK(v2v.size() + both.size() + cellular.size() == 26);
  for (const auto& id : v2v) CHECK_MESSAGE(classify(app(id)).demanding.paradigm == Paradigm::kV2V, id);
  for (const auto& id : both) CHECK_MESSAGE(classify(app(id)).demanding.paradigm == Paradigm::kBoth, id);
  for (const auto& id : cellular)
    CHECK_MESSAGE(classify(app(id)).demanding.paradigm == Paradigm::kCellular, id);

  CHECK(classify(app("LEZ")).demanding == SpatioTemporalClass{Scale::kLarge, Scale::kLarge, Paradigm::kCellular});
  CHECK(classify(app("FEP")).demanding == SpatioTemporalClass{Scale::kMedium, Scale::kMedium, Paradigm::kBoth});
  CHECK(classify(app("AP")).demanding == SpatioTemporalClass{Scale::kSmall, Scale::kMedium, Paradigm::kBoth});
  CHECK(classify(app("PCS")).demanding == SpatioTemporalClass{Scale::kSmall, Scale::kSmall, Paradigm::kV2V});
}

TEST_CASE("paradigm rule") {
  CHECK(recommend_paradigm(Scale::kSmall, Scale::kSmall, true) == Paradigm::kV2V);
  CHECK(recommend_paradigm(Scale::kLarge, Scale::kSmall, false) == Paradigm::kCellular);
  CHECK(recommend_paradigm(Scale::kSmall, Scale::kLarge, true) == Paradigm::kCellular);
  CHECK(recommend_paradigm(Scale::kSmall, Scale::kLarge, false) == Paradigm::kBoth);
  CHECK(recommend_paradigm(Scale::kMedium, Scale::kSmall, false) == Paradigm::kBoth);
}

TEST_CASE("property: regime rules hold under randomized thresholds") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> spatial(20.0, 3000.0);
  std::uniform_real_distribution<double> temporal(5.0, 50000.0);
  for (int trial = 0; trial < 1000; ++trial) {
    ClassifierThresholds t;
    double a = spatial(gen), b = spatial(gen);
    t.spatial_small_max_m = std::min(a, b);
    t.spatial_medium_max_m = std::max(a, b) + 1.0;
    a = temporal(gen);
    b = temporal(gen);
    t.temporal_small_max_ms = std::min(a, b);
    t.temporal_medium_max_ms = std::max(a, b) + 1.0;

    ClassifierThresholds looser = t;
    looser.spatial_small_max_m *= 1.5;
    looser.spatial_medium_max_m *= 1.5;
    looser.temporal_small_max_ms *= 1.5;
    looser.temporal_medium_max_ms *= 1.5;

    for (const auto& entry : builtin_registry()) {
      const Classification c = classify(entry, t);
      for (const auto& k : {c.demanding, c.relaxed}) {
        CHECK(k.paradigm == recommend_paradigm(k.spatial, k.temporal, entry.has_cloud_link()));
        if (k.spatial == Scale::kSmall && k.temporal == Scale::kSmall) CHECK(k.paradigm == Paradigm::kV2V);
        if (k.spatial == Scale::kLarge) CHECK(k.paradigm == Paradigm::kCellular);
      }
      // The relaxed end is never on a smaller scale than the demanding end.
      CHECK(c.relaxed.spatial >= c.demanding.spatial);
      CHECK(c.relaxed.temporal >= c.demanding.temporal);
      // Raising every threshold can only move an entry to smaller scales.
      const Classification l = classify(entry, looser);
      CHECK(l.demanding.spatial <= c.demanding.spatial);
      CHECK(l.demanding.temporal <= c.demanding.temporal);
    }
  }
}

TEST_CASE("threshold validation") {
  ClassifierThresholds t;
  t.spatial_small_max_m = 2000.0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
  t = ClassifierThresholds{};
  t.temporal_small_max_ms = -1.0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
}

TEST_CASE("JSON round trip preserves every entry") {
  for (const auto& entry : builtin_registry()) {
    const nlohmann::json j = entry;
    const AppRequirement back = j.get<AppRequirement>();
    CHECK_MESSAGE(back == entry, entry.id);
  }
}

TEST_CASE("override file loading") {
  nlohmann::json doc;
  doc["applications"] = nlohmann::json::array({builtin_registry()[0], builtin_registry()[8]});
  const auto ok = temp_file("ok.json", doc.dump());
  const auto loaded = load_registry(ok.string());
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[1].id == "LEZ");

  doc["applications"][1]["id"] = "PCS";
  CHECK_THROWS_AS(load_registry(temp_file("dup.json", doc.dump()).string()), ValidationError);

  nlohmann::json bad = {{"applications", nlohmann::json::array({builtin_registry()[0]})}};
  bad["applications"][0]["colour"] = "red";
  CHECK_THROWS_AS(load_registry(temp_file("unknown.json", bad.dump()).string()), ValidationError);

  bad = {{"applications", nlohmann::json::array({builtin_registry()[0]})}};
  bad["applications"][0]["range"]["lower_m"] = -5;
  CHECK_THROWS_AS(load_registry(temp_file("neg.json", bad.dump()).string()), ValidationError);

  CHECK_THROWS_AS(load_registry(temp_file("empty.json", R"({"applications": []})").string()), ValidationError);
  CHECK_THROWS_AS(load_registry(temp_file("broken.json", "{").string()), ValidationError);
  CHECK_THROWS_AS(load_registry(std::string("/nonexistent/registry.json")), IoError);
}

TEST_CASE("classification CSV report") {
  const std::string csv = registry_report(builtin_registry(), ReportFormat::kCsv);
  const auto lines = split(csv, '\n');
  REQUIRE(lines.size() >= 27);
  CHECK(lines[0] == kClassificationCsvHeader);
  int rows = 0;
  for (std::size_t i = 1; i < lines.size(); ++i)
    if (!lines[i].empty()) ++rows;
  CHECK(rows == 26);
  CHECK(csv.find("\nPCS,") != std::string::npos);
  CHECK(lines[1].substr(lines[1].rfind(',') + 1) == "V2V");

  const auto json = nlohmann::json::parse(registry_report(builtin_registry(), ReportFormat::kJson));
  CHECK(json["applications"].size() == 26);
  CHECK(json["classifications"].size() == 26);

  // A table report can cover any subset.
  const std::vector<AppRequirement> subset = {app("RVS"), app("AP")};
  const std::string table = registry_report(subset, ReportFormat::kTable);
  CHECK(table.find("RVS") != std::string::npos);
  CHECK(table.find("Cellular") != std::string::npos);
  CHECK(table.find("PCS") == std::string::npos);
}
