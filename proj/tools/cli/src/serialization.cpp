#include "riesz_cli/serialization.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "riesz/error.hpp"

namespace riesz::cli {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json numbers(std::span<const double> values) {
  json arr = json::array();
  for (double v : values) arr.push_back(number(v));
  return arr;
}

std::vector<double> to_numbers(const json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(to_number(v));
  return out;
}

json optional_number(const std::optional<double>& value) { return value ? number(*value) : json(nullptr); }

std::optional<double> to_optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return to_number(j.at(key));
}

json to_json(const QuantizationUsed& q) { return {{"mode", q.mode}, {"step", number(q.step)}, {"unit", number(q.unit)}}; }

QuantizationUsed quantization_from_json(const json& j) {
  return {j.at("mode").get<std::string>(), to_number(j.at("step")), to_number(j.at("unit"))};
}

json to_json(const CantorFactor& f) { return {{"m", f.m}, {"n", f.n}, {"kept", f.kept}}; }

CantorFactor factor_from_json(const json& j) {
  CantorFactor f;
  f.m = j.at("m").get<std::size_t>();
  f.n = j.at("n").get<std::size_t>();
  f.kept = j.contains("kept") ? j.at("kept").get<std::vector<std::size_t>>() : default_kept(f.m, f.n);
  return f;
}

}  // namespace

json number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

double to_number(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    fail(ErrorKind::ParseError, "expected a number, got \"" + s + "\"");
  }
  return j.get<double>();
}

json to_json(const PointCloud& cloud) {
  json pts = json::array();
  for (std::size_t i = 0; i < cloud.size(); ++i) pts.push_back(numbers(cloud.point(i)));
  return {{"dim", cloud.dim()}, {"points", pts}};
}

PointCloud cloud_from_json(const json& j) {
  const auto dim = j.at("dim").get<std::size_t>();
  std::vector<double> coords;
  for (const auto& row : j.at("points")) {
    require(row.size() == dim, ErrorKind::DimensionMismatch, "point row has the wrong number of coordinates");
    for (const auto& v : row) coords.push_back(to_number(v));
  }
  return PointCloud(dim, std::move(coords));
}

json to_json(const CantorSpec& spec) {
  json factors = json::array();
  for (const auto& f : spec.factors) factors.push_back(to_json(f));
  return {{"factors", factors}, {"level", spec.level}};
}

CantorSpec cantor_spec_from_json(const json& j) {
  CantorSpec spec;
  for (const auto& f : j.at("factors")) spec.factors.push_back(factor_from_json(f));
  spec.level = j.at("level").get<std::size_t>();
  validate(spec);
  return spec;
}

json to_json(const EnergyTargetSpec& spec) {
  return {{"s", number(spec.s)}, {"targets", numbers(spec.targets)}, {"tolerance", number(spec.tolerance)}};
}

EnergyTargetSpec energy_target_spec_from_json(const json& j) {
  EnergyTargetSpec spec;
  spec.s = to_number(j.at("s"));
  spec.targets = to_numbers(j.at("targets"));
  if (j.contains("tolerance")) spec.tolerance = to_number(j.at("tolerance"));
  return spec;
}

json to_json(const MeasureSpec& measure) {
  return std::visit(Overloaded{
                        [](const UniformCube& m) { return json{{"variant", "UniformCube"}, {"d", m.d}}; },
                        [](const UniformCircle&) { return json{{"variant", "UniformCircle"}}; },
                        [](const CantorProduct& m) {
                          json factors = json::array();
                          for (const auto& f : m.factors) factors.push_back(to_json(f));
                          return json{{"variant", "CantorProduct"}, {"factors", factors}};
                        },
                        [](const RotatingSemicircle& m) {
                          return json{{"variant", "RotatingSemicircle"}, {"t", number(m.t)}};
                        },
                        [](const Empirical& m) { return json{{"variant", "Empirical"}, {"cloud", to_json(m.cloud)}}; },
                    },
                    measure);
}

MeasureSpec measure_from_json(const json& j) {
  const auto variant = j.at("variant").get<std::string>();
  MeasureSpec out = UniformCircle{};
  if (variant == "UniformCube") {
    out = UniformCube{j.value("d", std::size_t{1})};
  } else if (variant == "UniformCircle") {
    out = UniformCircle{};
  } else if (variant == "CantorProduct") {
    CantorProduct m;
    for (const auto& f : j.at("factors")) m.factors.push_back(factor_from_json(f));
    out = std::move(m);
  } else if (variant == "RotatingSemicircle") {
    out = RotatingSemicircle{j.contains("t") ? to_number(j.at("t")) : 0.0};
  } else if (variant == "Empirical") {
    out = Empirical{cloud_from_json(j.at("cloud"))};
  } else {
    fail(ErrorKind::ParseError, "unknown measure variant \"" + variant + "\"");
  }
  validate(out);
  return out;
}

json to_json(const EnergyProfile& profile) {
  json values = json::array();
  for (const auto& row : profile.values) values.push_back(numbers(row));
  return {{"s_grid", numbers(profile.s_grid)}, {"n_grid", profile.n_grid}, {"values", values}};
}

EnergyProfile profile_from_json(const json& j) {
  EnergyProfile p;
  p.s_grid = to_numbers(j.at("s_grid"));
  p.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
  for (const auto& row : j.at("values")) p.values.push_back(to_numbers(row));
  return p;
}

json to_json(const DimensionEstimate& est) {
  return {
      {"s_hat", number(est.s_hat)},
      {"s_grid", numbers(est.s_grid)},
      {"slopes", numbers(est.slopes)},
      {"increment_exponents", numbers(est.increment_exponents)},
      {"residuals", numbers(est.residuals)},
      {"accepted", est.accepted},
      {"threshold", number(est.threshold)},
      {"window", {{"n_lo", est.window.n_lo}, {"n_hi", est.window.n_hi}}},
      {"bracket", {number(est.bracket_lo), number(est.bracket_hi)}},
      {"midpoint", {{"s", number(est.midpoint)},
                    {"accepted", est.midpoint_accepted},
                    {"slope", number(est.midpoint_slope)},
                    {"increment_exponent", number(est.midpoint_increment_exponent)}}},
      {"slopes_monotone", est.slopes_monotone},
  };
}

DimensionEstimate estimate_from_json(const json& j) {
  DimensionEstimate est;
  est.s_hat = to_number(j.at("s_hat"));
  est.s_grid = to_numbers(j.at("s_grid"));
  est.slopes = to_numbers(j.at("slopes"));
  est.increment_exponents = to_numbers(j.at("increment_exponents"));
  est.residuals = to_numbers(j.at("residuals"));
  est.accepted = j.at("accepted").get<std::vector<bool>>();
  est.threshold = to_number(j.at("threshold"));
  est.window = {j.at("window").at("n_lo").get<std::size_t>(), j.at("window").at("n_hi").get<std::size_t>()};
  est.bracket_lo = to_number(j.at("bracket").at(0));
  est.bracket_hi = to_number(j.at("bracket").at(1));
  const auto& mid = j.at("midpoint");
  est.midpoint = to_number(mid.at("s"));
  est.midpoint_accepted = mid.at("accepted").get<bool>();
  est.midpoint_slope = to_number(mid.at("slope"));
  est.midpoint_increment_exponent = to_number(mid.at("increment_exponent"));
  est.slopes_monotone = j.at("slopes_monotone").get<bool>();
  return est;
}

json to_json(const ExperimentReport& report, bool include_values) {
  json cells = json::array();
  for (const auto& c : report.cells) {
    json cell = {{"n", c.n},
                 {"seed", c.seed},
                 {"mean", number(c.mean)},
                 {"standard_error", number(c.standard_error)},
                 {"dispersion", number(c.dispersion)},
                 {"z_score", optional_number(c.z_score)},
                 {"exceedance_rate", optional_number(c.exceedance_rate)}};
    if (include_values) cell["values"] = numbers(c.values);
    cells.push_back(std::move(cell));
  }
  return {{"kind", report.kind},          {"measure", to_json(report.measure)},
          {"s", number(report.s)},        {"n_grid", report.n_grid},
          {"reps", report.reps},          {"seed", report.seed},
          {"eps", optional_number(report.eps)}, {"oracle", optional_number(report.oracle)},
          {"oracle_method", report.oracle_method}, {"cells", cells}};
}

ExperimentReport report_from_json(const json& j) {
  ExperimentReport r;
  r.kind = j.at("kind").get<std::string>();
  r.measure = measure_from_json(j.at("measure"));
  r.s = to_number(j.at("s"));
  r.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
  r.reps = j.at("reps").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.eps = to_optional_number(j, "eps");
  r.oracle = to_optional_number(j, "oracle");
  r.oracle_method = j.at("oracle_method").get<std::string>();
  for (const auto& c : j.at("cells")) {
    CellStats cell;
    cell.n = c.at("n").get<std::size_t>();
    cell.seed = c.at("seed").get<std::uint64_t>();
    cell.mean = to_number(c.at("mean"));
    cell.standard_error = to_number(c.at("standard_error"));
    cell.dispersion = to_number(c.at("dispersion"));
    cell.z_score = to_optional_number(c, "z_score");
    cell.exceedance_rate = to_optional_number(c, "exceedance_rate");
    if (c.contains("values")) cell.values = to_numbers(c.at("values"));
    r.cells.push_back(std::move(cell));
  }
  return r;
}

json to_json(const ValueSet& set, std::size_t values_limit) {
  json j = {{"kind", to_string(set.kind)}, {"count", set.count}, {"quantization", to_json(set.quantization)}};
  j["values_included"] = set.count <= values_limit;
  if (set.count <= values_limit) j["values"] = numbers(set.values);
  return j;
}

ValueSet value_set_from_json(const json& j) {
  ValueSet set;
  const auto kind = j.at("kind").get<std::string>();
  set.kind = kind == "distance" ? ValueKind::Distance : ValueKind::DotProduct;
  set.count = j.at("count").get<std::size_t>();
  set.quantization = quantization_from_json(j.at("quantization"));
  if (j.contains("values")) set.values = to_numbers(j.at("values"));
  return set;
}

json to_json(const ErdosReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"s0", number(r.s0)}, {"label", r.label}, {"bound", number(r.bound)}, {"ratio", number(r.ratio)}});
  return {{"n", report.n},
          {"d", report.d},
          {"count", report.count},
          {"quantization", to_json(report.quantization)},
          {"rows", rows}};
}

json to_json(const EnergySequence& seq) {
  json cps = json::array();
  for (const auto& c : seq.checkpoints)
    cps.push_back({{"n", c.n}, {"target", number(c.target)}, {"achieved", number(c.achieved)}});
  return {{"points", seq.cloud.size()}, {"checkpoints", cps}};
}

json to_json(const BallEnergy& e) {
  return {{"self", number(e.self)},
          {"cross", number(e.cross)},
          {"total", number(e.total)},
          {"method", e.method},
          {"standard_error", number(e.standard_error)}};
}

json to_json(const BallPrediction& p) {
  const auto& h = p.hypothesis;
  return {{"value", number(p.value)},
          {"discrete_part", number(p.discrete_part)},
          {"self_constant", number(p.self_constant)},
          {"hypothesis",
           {{"min_distance", number(h.min_distance)},
            {"epsilon_max", number(h.epsilon_max)},
            {"n_threshold", number(h.n_threshold)},
            {"separated", h.separated},
            {"n_large_enough", h.n_large_enough},
            {"closest_pair", {h.closest_i, h.closest_j}}}}};
}

json to_json(const ResultEnvelope& e) {
  return {{"schema", e.schema},
          {"tool", {{"name", e.tool}, {"version", e.version}}},
          {"config", e.config},
          {"timing", e.timing},
          {"payload", e.payload}};
}

ResultEnvelope envelope_from_json(const json& j) {
  ResultEnvelope e;
  e.schema = j.at("schema").get<std::string>();
  require(e.schema == kSchema, ErrorKind::ParseError, "unsupported schema \"" + e.schema + "\"");
  e.tool = j.at("tool").at("name").get<std::string>();
  e.version = j.at("tool").at("version").get<std::string>();
  e.config = j.at("config");
  e.timing = j.at("timing");
  e.payload = j.at("payload");
  return e;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& ex) {
    fail(ErrorKind::ParseError, ex.what());
  }
}

json load_json_argument(const std::string& argument) {
  const auto first = argument.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (argument[first] == '{' || argument[first] == '[')) return parse_json(argument);
  std::ifstream in(argument);
  require(static_cast<bool>(in), ErrorKind::ParseError, "cannot open JSON file " + argument);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

}  // namespace riesz::cli
