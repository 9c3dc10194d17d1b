#pragma once

#include <string>

#include <json.hpp>

#include "sdpguard/experiment.hpp"

namespace sdpguard {

using nlohmann::json;

void to_json(json& j, const Swarm& s);
void from_json(const json& j, Swarm& s);
void to_json(json& j, const MeasurementSet& m);
void from_json(const json& j, MeasurementSet& m);
void to_json(json& j, const AttackSettings& s);
void from_json(const json& j, AttackSettings& s);
void to_json(json& j, const AttackPlan& p);
void from_json(const json& j, AttackPlan& p);
void to_json(json& j, const AttackedScenario& s);
void from_json(const json& j, AttackedScenario& s);
void to_json(json& j, const SuspectSets& s);
void from_json(const json& j, SuspectSets& s);
void to_json(json& j, const FeasibilityProblem& p);
void from_json(const json& j, FeasibilityProblem& p);
void to_json(json& j, const OracleOptions& o);
void from_json(const json& j, OracleOptions& o);
void to_json(json& j, const OracleResult& r);
void to_json(json& j, const DetectionResult& r);
void to_json(json& j, const ExperimentConfig& c);
void from_json(const json& j, ExperimentConfig& c);

// Dense Ĝ matrices (row-major) and (type, i, j, bound) constraint records.
json problem_dump(const FeasibilityProblem& problem);

json read_json_file(const std::string& path);
// Writes pretty JSON with a trailing newline; "-" means stdout.
void write_json_file(const std::string& path, const json& j);

}  // namespace sdpguard
