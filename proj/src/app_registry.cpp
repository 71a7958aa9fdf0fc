#include "v2vlab/app_registry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "v2vlab/errors.hpp"
#include "v2vlab/text.hpp"

namespace v2vlab {

// ---------------------------------------------------------------------------
// Links

bool CommLink::is_v2v_class() const {
  if (hops.size() != 2) return false;
  const auto direct = [](Endpoint e) {
    return e == Endpoint::kVehicle || e == Endpoint::kInfrastructure;
  };
  return direct(hops[0]) && direct(hops[1]) &&
         (hops[0] == Endpoint::kVehicle || hops[1] == Endpoint::kVehicle);
}

bool CommLink::involves(Endpoint e) const {
  return std::find(hops.begin(), hops.end(), e) != hops.end();
}

std::string_view to_string(Endpoint e) {
  switch (e) {
    case Endpoint::kVehicle: return "V";
    case Endpoint::kInfrastructure: return "I";
    case Endpoint::kCloud: return "C";
    case Endpoint::kMobileDevice: return "M";
    case Endpoint::kSensor: return "Sensor";
  }
  return "?";
}

std::string CommLink::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < hops.size(); ++i) {
    if (i > 0) out += '2';
    out += v2vlab::to_string(hops[i]);
  }
  return out;
}

namespace {

Endpoint parse_endpoint(std::string_view token) {
  if (token == "V") return Endpoint::kVehicle;
  if (token == "I") return Endpoint::kInfrastructure;
  if (token == "C") return Endpoint::kCloud;
  if (token == "M") return Endpoint::kMobileDevice;
  if (token == "Sensor") return Endpoint::kSensor;
  throw ValidationError("unknown link endpoint '" + std::string(token) + "'");
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::vector<CommLink> parse_links(std::string_view text) {
  std::vector<CommLink> out;
  for (const std::string& raw : split(text, ',')) {
    const std::string item = trim(raw);
    if (item.empty()) throw ValidationError("empty link in '" + std::string(text) + "'");
    // Each '2'-separated position may list alternatives with '/'.
    std::vector<std::vector<Endpoint>> positions;
    for (const std::string& pos : split(item, '2')) {
      std::vector<Endpoint> alternatives;
      for (const std::string& alt : split(pos, '/')) alternatives.push_back(parse_endpoint(alt));
      positions.push_back(std::move(alternatives));
    }
    if (positions.size() < 2) throw ValidationError("link '" + item + "' needs two endpoints");
    std::vector<std::vector<Endpoint>> paths{{}};
    for (const auto& alternatives : positions) {
      std::vector<std::vector<Endpoint>> next;
      for (const auto& prefix : paths) {
        for (Endpoint e : alternatives) {
          auto path = prefix;
          path.push_back(e);
          next.push_back(std::move(path));
        }
      }
      paths = std::move(next);
    }
    for (auto& hops : paths) {
      CommLink link{std::move(hops)};
      if (std::find(out.begin(), out.end(), link) == out.end()) out.push_back(std::move(link));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Requirement specs

namespace {

std::string format_length(double meters) {
  if (meters >= 1000.0 && std::fmod(meters, 1000.0) == 0.0)
    return format_shortest(meters / 1000.0) + "km";
  return format_shortest(meters) + "m";
}

std::string format_duration(double ms) {
  if (ms >= 60000.0 && std::fmod(ms, 60000.0) == 0.0) return format_shortest(ms / 60000.0) + "min";
  if (ms >= 1000.0 && std::fmod(ms, 1000.0) == 0.0) return format_shortest(ms / 1000.0) + "s";
  return format_shortest(ms) + "ms";
}

std::string format_rate(double hz) { return format_shortest(hz) + "Hz"; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " must be > 0");
}

}  // namespace

std::string_view to_string(RangeSymbol s) {
  switch (s) {
    case RangeSymbol::kCellularRadius: return "cellular-radius";
    case RangeSymbol::kVehicleUserDistance: return "vehicle-user-distance";
    case RangeSymbol::kInterVehicleGaps: return "inter-vehicle-gaps";
    case RangeSymbol::kV2IDistance: return "v2i-distance";
    case RangeSymbol::kContextDependent: return "context-dependent";
  }
  return "?";
}

void RangeSpec::validate() const {
  switch (kind) {
    case Kind::kFixed:
    case Kind::kAtLeast:
      require_positive(lower_m, "range");
      break;
    case Kind::kInterval:
      require_positive(lower_m, "range lower bound");
      require_positive(upper_m, "range upper bound");
      if (lower_m > upper_m) throw ValidationError("range interval lower bound exceeds upper bound");
      break;
    case Kind::kSymbolic:
      if (symbols.empty()) throw ValidationError("symbolic range needs at least one symbol");
      if (std::all_of(symbols.begin(), symbols.end(),
                      [](RangeSymbol s) { return s == RangeSymbol::kContextDependent; }))
        throw ValidationError("symbolic range carries no spatial scale");
      break;
  }
}

std::string RangeSpec::to_string() const {
  std::vector<std::string> parts;
  const std::string approx = approximate ? "~" : "";
  switch (kind) {
    case Kind::kFixed: parts.push_back(approx + format_length(lower_m)); break;
    case Kind::kAtLeast: parts.push_back(">=" + format_length(lower_m)); break;
    case Kind::kInterval:
      parts.push_back(approx + format_length(lower_m) + "-" + format_length(upper_m) +
                      (open_upper ? "+" : ""));
      break;
    case Kind::kSymbolic: break;
  }
  for (RangeSymbol s : symbols) parts.emplace_back(v2vlab::to_string(s));
  return join(parts, "|");
}

void FrequencySpec::validate() const {
  if (!event_driven && !periodic_hz) throw ValidationError("frequency needs a rate or event-driven");
  if (periodic_hz) require_positive(*periodic_hz, "frequency");
  if (example_hz) require_positive(*example_hz, "example frequency");
}

std::string FrequencySpec::to_string() const {
  std::vector<std::string> parts;
  if (event_driven) parts.emplace_back("event-driven");
  if (periodic_hz) {
    std::string prefix;
    switch (bound) {
      case Bound::kExact: break;
      case Bound::kApprox: prefix = "~"; break;
      case Bound::kAtMost: prefix = "<="; break;
      case Bound::kAtLeast: prefix = ">="; break;
    }
    parts.push_back(prefix + format_rate(*periodic_hz));
  }
  return join(parts, "|");
}

void LatencySpec::validate() const {
  switch (kind) {
    case Kind::kBounded:
    case Kind::kAtLeast:
      require_positive(lower_ms, "latency");
      break;
    case Kind::kInterval:
      require_positive(lower_ms, "latency lower bound");
      require_positive(upper_ms, "latency upper bound");
      if (lower_ms > upper_ms)
        throw ValidationError("latency interval lower bound exceeds upper bound");
      break;
    case Kind::kBestEffort:
    case Kind::kDistanceDependent:
      break;
  }
}

std::string LatencySpec::to_string() const {
  std::string out;
  const std::string approx = approximate ? "~" : "";
  switch (kind) {
    case Kind::kBounded: out = approx + format_duration(lower_ms); break;
    case Kind::kAtLeast: out = ">=" + format_duration(lower_ms); break;
    case Kind::kInterval: out = approx + format_duration(lower_ms) + "-" + format_duration(upper_ms); break;
    case Kind::kBestEffort: return "best-effort";
    case Kind::kDistanceDependent: return "distance-dependent";
  }
  if (best_effort_fallback) out += "|best-effort";
  return out;
}

bool AppRequirement::has_v2v_link() const {
  return std::any_of(links.begin(), links.end(), [](const CommLink& l) { return l.is_v2v_class(); });
}

bool AppRequirement::has_cloud_link() const {
  return std::any_of(links.begin(), links.end(),
                     [](const CommLink& l) { return l.involves(Endpoint::kCloud); });
}

void AppRequirement::validate() const {
  if (id.empty()) throw ValidationError("application id must not be empty");
  try {
    if (links.empty()) throw ValidationError("at least one communication link required");
    for (const CommLink& link : links)
      if (link.hops.size() < 2) throw ValidationError("link needs two endpoints");
    range.validate();
    frequency.validate();
    latency.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(id + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Built-in registry

namespace {

RangeSpec fixed_m(double m, bool approx = false) {
  RangeSpec r;
  r.kind = RangeSpec::Kind::kFixed;
  r.lower_m = m;
  r.approximate = approx;
  return r;
}

RangeSpec interval_m(double lo, double hi, bool open_upper = false) {
  RangeSpec r;
  r.kind = RangeSpec::Kind::kInterval;
  r.lower_m = lo;
  r.upper_m = hi;
  r.open_upper = open_upper;
  return r;
}

RangeSpec at_least_m(double m) {
  RangeSpec r;
  r.kind = RangeSpec::Kind::kAtLeast;
  r.lower_m = m;
  return r;
}

RangeSpec symbolic(std::vector<RangeSymbol> symbols) {
  RangeSpec r;
  r.kind = RangeSpec::Kind::kSymbolic;
  r.symbols = std::move(symbols);
  return r;
}

FrequencySpec hz(double rate, FrequencySpec::Bound bound = FrequencySpec::Bound::kExact,
                 bool event_driven = false) {
  FrequencySpec f;
  f.periodic_hz = rate;
  f.bound = bound;
  f.event_driven = event_driven;
  return f;
}

FrequencySpec event_driven() {
  FrequencySpec f;
  f.event_driven = true;
  return f;
}

LatencySpec ms(double bound, bool approx = false) {
  LatencySpec l;
  l.kind = LatencySpec::Kind::kBounded;
  l.lower_ms = bound;
  l.approximate = approx;
  return l;
}

LatencySpec ms_interval(double lo, double hi) {
  LatencySpec l;
  l.kind = LatencySpec::Kind::kInterval;
  l.lower_ms = lo;
  l.upper_ms = hi;
  return l;
}

LatencySpec ms_at_least(double lo) {
  LatencySpec l;
  l.kind = LatencySpec::Kind::kAtLeast;
  l.lower_ms = lo;
  return l;
}

LatencySpec latency_kind(LatencySpec::Kind kind) {
  LatencySpec l;
  l.kind = kind;
  return l;
}

std::vector<AppRequirement> make_builtin() {
  using B = FrequencySpec::Bound;
  using S = RangeSymbol;
  const auto cat_safety = Category::kActiveSafety;
  const auto cat_fuel = Category::kFuelEmission;
  const auto cat_auto = Category::kAutomation;
  const auto cat_info = Category::kInfotainment;

  std::vector<AppRequirement> apps = {
      // Active safety
      {"PCS", "Pre-crash sensing", cat_safety, parse_links("V2V"), fixed_m(50), hz(50), ms(20)},
      {"EBL", "Emergency brake lights", cat_safety, parse_links("V2V"), fixed_m(200), hz(10), ms(100)},
      {"CCW", "Collaborative collision warning", cat_safety, parse_links("V2V"), fixed_m(150), hz(10),
       ms(100)},
      {"LTA", "Left turn assistant", cat_safety, parse_links("I2V,V2I"), fixed_m(300), hz(10), ms(100)},
      {"LCW", "Lane change warning", cat_safety, parse_links("V2V"), fixed_m(150), hz(10), ms(100)},
      {"TSV", "Traffic signal violation warning", cat_safety, parse_links("I2V"), fixed_m(250), hz(10),
       ms(100)},
      {"SSV", "Stop sign violation warning", cat_safety, parse_links("I2V,V2I"), fixed_m(300), hz(10),
       ms(100)},
      {"CSW", "Curve speed warning", cat_safety, parse_links("I2V"), fixed_m(200), hz(1), ms(1000)},
      // Fuel economy and emission control
      {"LEZ", "Low emission zone", cat_fuel, parse_links("C2V,V2C"), at_least_m(1000), hz(1, B::kAtMost),
       ms_at_least(10000)},
      {"FEP", "Fuel-economy-oriented trip planning", cat_fuel, parse_links("C/I/V2V,V2V/I/C"),
       at_least_m(300), hz(1, B::kAtLeast), ms(1000, true)},
      {"PFO", "Preview-based fuel economy optimization", cat_fuel, parse_links("C/I/V2V,V2V/I/C"),
       interval_m(300, 13000), hz(1, B::kAtLeast), latency_kind(LatencySpec::Kind::kDistanceDependent)},
      {"Stop-start", "Stop-start", cat_fuel, parse_links("V2V,V2I,I2V"), fixed_m(50, true),
       hz(1, B::kAtLeast), ms(100, true)},
      {"Platoon", "Platoon", cat_fuel, parse_links("V2V"), interval_m(50, 300), hz(10, B::kAtLeast),
       ms(100, true)},
      // Networked vehicle automation
      {"AVT", "Adaptive vehicle tuning", cat_auto, parse_links("V2V,V2C2V"), fixed_m(100, true),
       hz(10, B::kApprox), ms(100, true)},
      {"CFEM", "Collaborative failure-mode-effect-management", cat_auto, parse_links("V2V,V2I,I2V"),
       fixed_m(300, true), hz(10, B::kApprox), ms(100, true)},
      {"TJA", "Traffic jam assist", cat_auto, parse_links("V2V"), interval_m(10, 300), hz(10, B::kApprox),
       ms(100, true)},
      {"SCLC", "Supercruise with opportunistic lane change", cat_auto, parse_links("V2V"),
       interval_m(10, 300), hz(10, B::kApprox), ms(100, true)},
      {"AP", "Automated valet/street parking", cat_auto, parse_links("V2V,V2C2V,V2Sensor"),
       interval_m(10, 1000, true), hz(1, B::kAtMost), ms_at_least(1000)},
      // Vehicular infotainment
      {"RVS", "Remote vehicle status", cat_info, parse_links("V2C,C2V,C2M"),
       symbolic({S::kCellularRadius, S::kVehicleUserDistance}), hz(0.1, B::kAtMost),
       latency_kind(LatencySpec::Kind::kBestEffort)},
      {"RVC", "Remote vehicle command", cat_info, parse_links("M2C,C2V,V2C,C2M"),
       symbolic({S::kCellularRadius, S::kVehicleUserDistance}), event_driven(), ms(5000)},
      {"RTCS", "Real-time cloud services to vehicle", cat_info, parse_links("C2V"),
       symbolic({S::kCellularRadius}), hz(10, B::kAtMost), ms_interval(100, 10000)},
      {"CSS", "Crowd-sourced sensing", cat_info, parse_links("V2V,V2C,C/I2V"),
       symbolic({S::kCellularRadius, S::kInterVehicleGaps}), hz(1, B::kAtMost, true),
       ms_interval(1000, 60000)},
      {"DID", "Delay-insensitive downloads", cat_info, parse_links("C2V,V2C"),
       symbolic({S::kCellularRadius}), event_driven(), latency_kind(LatencySpec::Kind::kBestEffort)},
      {"GPA", "Geographic proximity applications", cat_info, parse_links("V2V,V2C/I,C/I2V"),
       symbolic({S::kInterVehicleGaps, S::kV2IDistance, S::kCellularRadius}), hz(1, B::kAtMost, true),
       ms_at_least(100)},
      {"ESS", "Extended surrounding sensing", cat_info, parse_links("V2V,V2I,I2V"), interval_m(100, 300),
       hz(10, B::kApprox), ms(100, true)},
      {"CDPA", "Cloud-based diagnostics/prognostics/analytics", cat_info, parse_links("V2C"),
       symbolic({S::kCellularRadius}), hz(10, B::kAtLeast, true), ms_interval(300000, 600000)},
  };

  for (AppRequirement& app : apps) {
    if (app.id == "LEZ") app.frequency.example_hz = 0.1;
    if (app.id == "AVT") app.range.symbols = {S::kContextDependent};
    if (app.id == "GPA") app.latency.best_effort_fallback = true;
    if (app.id == "CDPA") app.latency.best_effort_fallback = true;
  }
  return apps;
}

}  // namespace

const std::vector<AppRequirement>& builtin_registry() {
  static const std::vector<AppRequirement> registry = make_builtin();
  return registry;
}

const AppRequirement* find_app(const std::vector<AppRequirement>& registry, std::string_view id) {
  auto it = std::find_if(registry.begin(), registry.end(),
                         [&](const AppRequirement& a) { return a.id == id; });
  return it == registry.end() ? nullptr : &*it;
}

// ---------------------------------------------------------------------------
// Classification

void ClassifierThresholds::validate() const {
  require_positive(spatial_small_max_m, "spatial small threshold");
  require_positive(spatial_medium_max_m, "spatial medium threshold");
  require_positive(temporal_small_max_ms, "temporal small threshold");
  require_positive(temporal_medium_max_ms, "temporal medium threshold");
  if (spatial_small_max_m > spatial_medium_max_m)
    throw ValidationError("spatial small threshold exceeds medium threshold");
  if (temporal_small_max_ms > temporal_medium_max_ms)
    throw ValidationError("temporal small threshold exceeds medium threshold");
}

namespace {

// Scale of a point value; thresholds are inclusive upper bounds.
Scale scale_of(double v, double small_max, double medium_max) {
  if (v <= small_max) return Scale::kSmall;
  if (v <= medium_max) return Scale::kMedium;
  return Scale::kLarge;
}

// Scale of the half-open spec [v, inf): it lies beyond a threshold it touches.
Scale scale_above(double v, double small_max, double medium_max) {
  if (v < small_max) return Scale::kSmall;
  if (v < medium_max) return Scale::kMedium;
  return Scale::kLarge;
}

std::optional<Scale> symbol_scale(RangeSymbol s) {
  switch (s) {
    case RangeSymbol::kCellularRadius:
    case RangeSymbol::kVehicleUserDistance:
      return Scale::kLarge;
    case RangeSymbol::kInterVehicleGaps:
    case RangeSymbol::kV2IDistance:
      return Scale::kSmall;
    case RangeSymbol::kContextDependent:
      return std::nullopt;
  }
  return std::nullopt;
}

std::pair<Scale, Scale> spatial_scales(const RangeSpec& r, const ClassifierThresholds& t) {
  const double s = t.spatial_small_max_m;
  const double m = t.spatial_medium_max_m;
  std::optional<Scale> demanding;
  std::optional<Scale> relaxed;
  switch (r.kind) {
    case RangeSpec::Kind::kFixed:
      demanding = relaxed = scale_of(r.lower_m, s, m);
      break;
    case RangeSpec::Kind::kInterval:
      demanding = scale_of(r.lower_m, s, m);
      relaxed = r.open_upper ? scale_above(r.upper_m, s, m) : scale_of(r.upper_m, s, m);
      break;
    case RangeSpec::Kind::kAtLeast:
      demanding = scale_above(r.lower_m, s, m);
      relaxed = Scale::kLarge;
      break;
    case RangeSpec::Kind::kSymbolic:
      break;
  }
  for (RangeSymbol sym : r.symbols) {
    const auto scale = symbol_scale(sym);
    if (!scale) continue;
    demanding = demanding ? std::min(*demanding, *scale) : *scale;
    relaxed = relaxed ? std::max(*relaxed, *scale) : *scale;
  }
  if (!demanding || !relaxed) throw ValidationError("range carries no spatial scale");
  return {*demanding, *relaxed};
}

std::pair<Scale, Scale> temporal_scales(const LatencySpec& l, const ClassifierThresholds& t) {
  const double s = t.temporal_small_max_ms;
  const double m = t.temporal_medium_max_ms;
  Scale demanding = Scale::kLarge;
  Scale relaxed = Scale::kLarge;
  switch (l.kind) {
    case LatencySpec::Kind::kBounded:
      demanding = relaxed = scale_of(l.lower_ms, s, m);
      break;
    case LatencySpec::Kind::kInterval:
      demanding = scale_of(l.lower_ms, s, m);
      relaxed = scale_of(l.upper_ms, s, m);
      break;
    case LatencySpec::Kind::kAtLeast:
      demanding = scale_above(l.lower_ms, s, m);
      relaxed = Scale::kLarge;
      break;
    case LatencySpec::Kind::kBestEffort:
      break;
    case LatencySpec::Kind::kDistanceDependent:
      demanding = relaxed = Scale::kMedium;
      break;
  }
  if (l.best_effort_fallback) relaxed = Scale::kLarge;
  return {demanding, relaxed};
}

}  // namespace

Paradigm recommend_paradigm(Scale spatial, Scale temporal, bool cloud_link) {
  if (spatial == Scale::kLarge) return Paradigm::kCellular;
  if (temporal == Scale::kLarge && cloud_link) return Paradigm::kCellular;
  if (spatial == Scale::kSmall && temporal == Scale::kSmall) return Paradigm::kV2V;
  return Paradigm::kBoth;
}

Classification classify(const AppRequirement& app, const ClassifierThresholds& thresholds) {
  app.validate();
  thresholds.validate();
  const auto [spatial_d, spatial_r] = spatial_scales(app.range, thresholds);
  const auto [temporal_d, temporal_r] = temporal_scales(app.latency, thresholds);
  const bool cloud = app.has_cloud_link();
  Classification c;
  c.demanding = {spatial_d, temporal_d, recommend_paradigm(spatial_d, temporal_d, cloud)};
  c.relaxed = {spatial_r, temporal_r, recommend_paradigm(spatial_r, temporal_r, cloud)};
  return c;
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::kActiveSafety: return "ActiveSafety";
    case Category::kFuelEmission: return "FuelEmission";
    case Category::kAutomation: return "Automation";
    case Category::kInfotainment: return "Infotainment";
  }
  return "?";
}

std::string_view to_string(Scale s) {
  switch (s) {
    case Scale::kSmall: return "Small";
    case Scale::kMedium: return "Medium";
    case Scale::kLarge: return "Large";
  }
  return "?";
}

std::string_view to_string(Paradigm p) {
  switch (p) {
    case Paradigm::kV2V: return "V2V";
    case Paradigm::kCellular: return "Cellular";
    case Paradigm::kBoth: return "Both";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// JSON

NLOHMANN_JSON_SERIALIZE_ENUM(Category, {{Category::kActiveSafety, "ActiveSafety"},
                                        {Category::kFuelEmission, "FuelEmission"},
                                        {Category::kAutomation, "Automation"},
                                        {Category::kInfotainment, "Infotainment"}})

namespace {

using nlohmann::json;

template <typename Enum, std::size_t N>
Enum enum_from(const json& j, const std::array<std::pair<Enum, const char*>, N>& table,
               const char* what) {
  if (!j.is_string()) throw ValidationError(std::string(what) + " must be a string");
  const auto& s = j.get_ref<const std::string&>();
  for (const auto& [value, name] : table)
    if (s == name) return value;
  throw ValidationError(std::string("unknown ") + what + " '" + s + "'");
}

template <typename Enum, std::size_t N>
const char* enum_name(Enum value, const std::array<std::pair<Enum, const char*>, N>& table) {
  for (const auto& [v, name] : table)
    if (v == value) return name;
  return "?";
}

constexpr std::array<std::pair<RangeSpec::Kind, const char*>, 4> kRangeKinds{{
    {RangeSpec::Kind::kFixed, "fixed"},
    {RangeSpec::Kind::kInterval, "interval"},
    {RangeSpec::Kind::kAtLeast, "at_least"},
    {RangeSpec::Kind::kSymbolic, "symbolic"},
}};

constexpr std::array<std::pair<RangeSymbol, const char*>, 5> kRangeSymbols{{
    {RangeSymbol::kCellularRadius, "cellular_radius"},
    {RangeSymbol::kVehicleUserDistance, "vehicle_user_distance"},
    {RangeSymbol::kInterVehicleGaps, "inter_vehicle_gaps"},
    {RangeSymbol::kV2IDistance, "v2i_distance"},
    {RangeSymbol::kContextDependent, "context_dependent"},
}};

constexpr std::array<std::pair<FrequencySpec::Bound, const char*>, 4> kFrequencyBounds{{
    {FrequencySpec::Bound::kExact, "exact"},
    {FrequencySpec::Bound::kApprox, "approx"},
    {FrequencySpec::Bound::kAtMost, "at_most"},
    {FrequencySpec::Bound::kAtLeast, "at_least"},
}};

constexpr std::array<std::pair<LatencySpec::Kind, const char*>, 5> kLatencyKinds{{
    {LatencySpec::Kind::kBounded, "bounded"},
    {LatencySpec::Kind::kInterval, "interval"},
    {LatencySpec::Kind::kAtLeast, "at_least"},
    {LatencySpec::Kind::kBestEffort, "best_effort"},
    {LatencySpec::Kind::kDistanceDependent, "distance_dependent"},
}};

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw ValidationError(std::string(what) + " must be an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ValidationError(std::string("unknown key '") + item.key() + "' in " + what);
  }
}

double number_at(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ValidationError(std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

bool bool_at(const json& j, const char* key) {
  if (!j.contains(key)) return false;
  if (!j.at(key).is_boolean()) throw ValidationError(std::string(key) + " must be a boolean");
  return j.at(key).get<bool>();
}

json range_to_json(const RangeSpec& r) {
  json symbols = json::array();
  for (RangeSymbol s : r.symbols) symbols.push_back(enum_name(s, kRangeSymbols));
  return {{"kind", enum_name(r.kind, kRangeKinds)}, {"lower_m", r.lower_m}, {"upper_m", r.upper_m},
          {"approximate", r.approximate},           {"open_upper", r.open_upper}, {"symbols", symbols}};
}

RangeSpec range_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "lower_m", "upper_m", "approximate", "open_upper", "symbols"}, "range");
  RangeSpec r;
  r.kind = enum_from(j.at("kind"), kRangeKinds, "range kind");
  r.lower_m = number_at(j, "lower_m", 0.0);
  r.upper_m = number_at(j, "upper_m", 0.0);
  r.approximate = bool_at(j, "approximate");
  r.open_upper = bool_at(j, "open_upper");
  if (j.contains("symbols")) {
    if (!j.at("symbols").is_array()) throw ValidationError("range symbols must be an array");
    for (const json& s : j.at("symbols")) r.symbols.push_back(enum_from(s, kRangeSymbols, "range symbol"));
  }
  return r;
}

json frequency_to_json(const FrequencySpec& f) {
  return {{"event_driven", f.event_driven},
          {"periodic_hz", f.periodic_hz ? json(*f.periodic_hz) : json(nullptr)},
          {"bound", enum_name(f.bound, kFrequencyBounds)},
          {"example_hz", f.example_hz ? json(*f.example_hz) : json(nullptr)}};
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) throw ValidationError(std::string(key) + " must be a number or null");
  return j.at(key).get<double>();
}

FrequencySpec frequency_from_json(const json& j) {
  reject_unknown_keys(j, {"event_driven", "periodic_hz", "bound", "example_hz"}, "frequency");
  FrequencySpec f;
  f.event_driven = bool_at(j, "event_driven");
  f.periodic_hz = optional_number(j, "periodic_hz");
  if (j.contains("bound")) f.bound = enum_from(j.at("bound"), kFrequencyBounds, "frequency bound");
  f.example_hz = optional_number(j, "example_hz");
  return f;
}

json latency_to_json(const LatencySpec& l) {
  return {{"kind", enum_name(l.kind, kLatencyKinds)},
          {"lower_ms", l.lower_ms},
          {"upper_ms", l.upper_ms},
          {"approximate", l.approximate},
          {"best_effort_fallback", l.best_effort_fallback}};
}

LatencySpec latency_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "lower_ms", "upper_ms", "approximate", "best_effort_fallback"},
                      "latency");
  LatencySpec l;
  l.kind = enum_from(j.at("kind"), kLatencyKinds, "latency kind");
  l.lower_ms = number_at(j, "lower_ms", 0.0);
  l.upper_ms = number_at(j, "upper_ms", 0.0);
  l.approximate = bool_at(j, "approximate");
  l.best_effort_fallback = bool_at(j, "best_effort_fallback");
  return l;
}

}  // namespace

void to_json(nlohmann::json& j, const AppRequirement& app) {
  json links = json::array();
  for (const CommLink& l : app.links) links.push_back(l.to_string());
  j = {{"id", app.id},
       {"name", app.name},
       {"category", app.category},
       {"links", links},
       {"range", range_to_json(app.range)},
       {"frequency", frequency_to_json(app.frequency)},
       {"latency", latency_to_json(app.latency)}};
}

void from_json(const nlohmann::json& j, AppRequirement& app) {
  try {
    reject_unknown_keys(j, {"id", "name", "category", "links", "range", "frequency", "latency"},
                        "application");
    app.id = j.at("id").get<std::string>();
    app.name = j.value("name", app.id);
    const auto& cat = j.at("category");
    app.category = enum_from(cat, std::array<std::pair<Category, const char*>, 4>{{
                                      {Category::kActiveSafety, "ActiveSafety"},
                                      {Category::kFuelEmission, "FuelEmission"},
                                      {Category::kAutomation, "Automation"},
                                      {Category::kInfotainment, "Infotainment"},
                                  }},
                             "category");
    app.links.clear();
    if (!j.at("links").is_array()) throw ValidationError("links must be an array");
    for (const json& l : j.at("links")) {
      for (CommLink& link : parse_links(l.get<std::string>())) {
        if (std::find(app.links.begin(), app.links.end(), link) == app.links.end())
          app.links.push_back(std::move(link));
      }
    }
    app.range = range_from_json(j.at("range"));
    app.frequency = frequency_from_json(j.at("frequency"));
    app.latency = latency_from_json(j.at("latency"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed application entry: ") + e.what());
  }
  app.validate();
}

namespace {

std::vector<AppRequirement> registry_from_json(const json& doc) {
  reject_unknown_keys(doc, {"applications", "classifications"}, "registry file");
  if (!doc.contains("applications") || !doc.at("applications").is_array())
    throw ValidationError("registry file needs an 'applications' array");
  std::vector<AppRequirement> apps;
  std::set<std::string> ids;
  for (const json& entry : doc.at("applications")) {
    AppRequirement app = entry.get<AppRequirement>();
    if (!ids.insert(app.id).second) throw ValidationError("duplicate application id '" + app.id + "'");
    apps.push_back(std::move(app));
  }
  if (apps.empty()) throw ValidationError("registry file has no applications");
  return apps;
}

}  // namespace

std::vector<AppRequirement> load_registry(const std::optional<std::string>& override_path) {
  if (!override_path) return builtin_registry();
  std::ifstream in(*override_path);
  if (!in) throw IoError("cannot open registry file '" + *override_path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("registry file is not valid JSON: " + std::string(e.what()));
  }
  return registry_from_json(doc);
}

// ---------------------------------------------------------------------------
// Reports

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "table") return ReportFormat::kTable;
  throw ValidationError("unknown report format '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> report_row(const AppRequirement& app, const Classification& c) {
  std::vector<std::string> links;
  for (const CommLink& l : app.links) links.push_back(l.to_string());
  return {app.id,
          std::string(to_string(app.category)),
          join(links, "+"),
          app.range.to_string(),
          app.frequency.to_string(),
          app.latency.to_string(),
          std::string(to_string(c.demanding.spatial)),
          std::string(to_string(c.demanding.temporal)),
          std::string(to_string(c.demanding.paradigm))};
}

json class_to_json(const SpatioTemporalClass& c) {
  return {{"spatial", to_string(c.spatial)},
          {"temporal", to_string(c.temporal)},
          {"paradigm", to_string(c.paradigm)}};
}

}  // namespace

std::string registry_report(const std::vector<AppRequirement>& apps, ReportFormat format,
                            const ClassifierThresholds& thresholds) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::kCsv: {
      out << kClassificationCsvHeader << '\n';
      for (const AppRequirement& app : apps) out << join(report_row(app, classify(app, thresholds)), ",") << '\n';
      break;
    }
    case ReportFormat::kJson: {
      json doc;
      doc["applications"] = json::array();
      doc["classifications"] = json::array();
      for (const AppRequirement& app : apps) {
        const Classification c = classify(app, thresholds);
        doc["applications"].push_back(app);
        json entry = class_to_json(c.demanding);
        entry["id"] = app.id;
        entry["relaxed"] = class_to_json(c.relaxed);
        doc["classifications"].push_back(std::move(entry));
      }
      out << doc.dump(2) << '\n';
      break;
    }
    case ReportFormat::kTable: {
      std::vector<std::vector<std::string>> rows{split(kClassificationCsvHeader, ',')};
      for (const AppRequirement& app : apps) rows.push_back(report_row(app, classify(app, thresholds)));
      std::vector<std::size_t> widths(rows.front().size(), 0);
      for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
      for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
          line += row[i];
          if (i + 1 < row.size()) line += std::string(widths[i] - row[i].size() + 2, ' ');
        }
        out << line << '\n';
      }
      break;
    }
  }
  return out.str();
}

}  // namespace v2vlab
