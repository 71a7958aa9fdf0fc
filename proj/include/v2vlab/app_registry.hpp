#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace v2vlab {

enum class Endpoint { kVehicle, kInfrastructure, kCloud, kMobileDevice, kSensor };

/// A directed communication path, e.g. V2V = {V, V}, V2C2V = {V, C, V}.
struct CommLink {
  std::vector<Endpoint> hops;

  // Direct vehicle/infrastructure link (V2V, V2I, I2V).
  bool is_v2v_class() const;
  bool involves(Endpoint e) const;
  std::string to_string() const;
  friend bool operator==(const CommLink&, const CommLink&) = default;
};

/// Parses table notation such as "V2V", "V2C2V", "V2Sensor" and the slash
/// shorthand "C/I/V2V" (expands to C2V, I2V, V2V). Comma separated.
std::vector<CommLink> parse_links(std::string_view text);

enum class RangeSymbol { kCellularRadius, kVehicleUserDistance, kInterVehicleGaps, kV2IDistance,
                         kContextDependent };

struct RangeSpec {
  enum class Kind { kFixed, kInterval, kAtLeast, kSymbolic };
  Kind kind = Kind::kFixed;
  double lower_m = 0.0;  // fixed value, interval lower bound, or floor
  double upper_m = 0.0;  // interval upper bound
  bool approximate = false;
  bool open_upper = false;  // "1km+"
  std::vector<RangeSymbol> symbols;

  void validate() const;
  std::string to_string() const;
  friend bool operator==(const RangeSpec&, const RangeSpec&) = default;
};

struct FrequencySpec {
  enum class Bound { kExact, kApprox, kAtMost, kAtLeast };
  bool event_driven = false;
  std::optional<double> periodic_hz;  // absent for purely event-driven apps
  Bound bound = Bound::kExact;
  std::optional<double> example_hz;  // "<=1Hz, e.g., 0.1Hz"

  bool is_periodic() const { return periodic_hz.has_value(); }
  void validate() const;
  std::string to_string() const;
  friend bool operator==(const FrequencySpec&, const FrequencySpec&) = default;
};

struct LatencySpec {
  enum class Kind { kBounded, kInterval, kAtLeast, kBestEffort, kDistanceDependent };
  Kind kind = Kind::kBounded;
  double lower_ms = 0.0;  // bound, interval lower bound, or floor
  double upper_ms = 0.0;
  bool approximate = false;
  bool best_effort_fallback = false;

  void validate() const;
  std::string to_string() const;
  friend bool operator==(const LatencySpec&, const LatencySpec&) = default;
};

enum class Category { kActiveSafety, kFuelEmission, kAutomation, kInfotainment };

struct AppRequirement {
  std::string id;
  std::string name;
  Category category = Category::kActiveSafety;
  std::vector<CommLink> links;
  RangeSpec range;
  FrequencySpec frequency;
  LatencySpec latency;

  bool has_v2v_link() const;
  bool has_cloud_link() const;
  void validate() const;
  friend bool operator==(const AppRequirement&, const AppRequirement&) = default;
};

enum class Scale { kSmall, kMedium, kLarge };
enum class Paradigm { kV2V, kCellular, kBoth };

struct ClassifierThresholds {
  double spatial_small_max_m = 300.0;
  double spatial_medium_max_m = 1000.0;
  double temporal_small_max_ms = 100.0;
  double temporal_medium_max_ms = 10000.0;

  void validate() const;
};

struct SpatioTemporalClass {
  Scale spatial = Scale::kSmall;
  Scale temporal = Scale::kSmall;
  Paradigm paradigm = Paradigm::kV2V;
  friend bool operator==(const SpatioTemporalClass&, const SpatioTemporalClass&) = default;
};

// Classification at the demanding end (smallest range, tightest latency)
// and at the relaxed end.
struct Classification {
  SpatioTemporalClass demanding;
  SpatioTemporalClass relaxed;
};

/// The 26 built-in applications, ordered by table then row.
const std::vector<AppRequirement>& builtin_registry();

/// Built-in registry, or the validated contents of a JSON override file.
std::vector<AppRequirement> load_registry(const std::optional<std::string>& override_path = {});

const AppRequirement* find_app(const std::vector<AppRequirement>& registry, std::string_view id);

Paradigm recommend_paradigm(Scale spatial, Scale temporal, bool cloud_link);

Classification classify(const AppRequirement& app, const ClassifierThresholds& thresholds = {});

std::string_view to_string(Endpoint e);
std::string_view to_string(Category c);
std::string_view to_string(Scale s);
std::string_view to_string(Paradigm p);
std::string_view to_string(RangeSymbol s);

void to_json(nlohmann::json& j, const AppRequirement& app);
void from_json(const nlohmann::json& j, AppRequirement& app);

enum class ReportFormat { kCsv, kJson, kTable };
ReportFormat parse_report_format(std::string_view name);

inline constexpr std::string_view kClassificationCsvHeader =
    "id,category,links,range,frequency,latency,spatial,temporal,paradigm";

/// All entries with their demanding-end classification.
std::string registry_report(const std::vector<AppRequirement>& apps, ReportFormat format,
                            const ClassifierThresholds& thresholds = {});

}  // namespace v2vlab
