#pragma once

#include <json.hpp>
#include <string>

#include "riesz/estimator.hpp"
#include "riesz/generators.hpp"
#include "riesz/measures.hpp"
#include "riesz/sets.hpp"
#include "riesz/stats.hpp"

namespace riesz::cli {

using nlohmann::json;

inline constexpr const char* kSchema = "riesz.result/1";
inline constexpr const char* kToolName = "riesz";
inline constexpr const char* kToolVersion = "0.1.0";

/// Non-finite doubles are written as the strings "inf", "-inf" and "nan".
json number(double value);
double to_number(const json& j);

json to_json(const PointCloud& cloud);
PointCloud cloud_from_json(const json& j);

json to_json(const CantorSpec& spec);
CantorSpec cantor_spec_from_json(const json& j);

json to_json(const EnergyTargetSpec& spec);
EnergyTargetSpec energy_target_spec_from_json(const json& j);

json to_json(const MeasureSpec& measure);
MeasureSpec measure_from_json(const json& j);

json to_json(const EnergyProfile& profile);
EnergyProfile profile_from_json(const json& j);

json to_json(const DimensionEstimate& est);
DimensionEstimate estimate_from_json(const json& j);

json to_json(const ExperimentReport& report, bool include_values = false);
ExperimentReport report_from_json(const json& j);

json to_json(const ValueSet& set, std::size_t values_limit = 100'000);
ValueSet value_set_from_json(const json& j);

json to_json(const ErdosReport& report);
json to_json(const EnergySequence& seq);
json to_json(const BallEnergy& energy);
json to_json(const BallPrediction& prediction);

struct ResultEnvelope {
  std::string schema = kSchema;
  std::string tool = kToolName;
  std::string version = kToolVersion;
  json config = json::object();
  json timing = json::object();
  json payload = json::object();
};

json to_json(const ResultEnvelope& envelope);
ResultEnvelope envelope_from_json(const json& j);

/// Parses JSON text, mapping syntax errors to ParseError.
json parse_json(const std::string& text);

/// Reads a JSON document from a literal string starting with '{' or '[', or from a file.
json load_json_argument(const std::string& argument);

}  // namespace riesz::cli
