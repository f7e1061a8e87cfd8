#pragma once

// JSON mapping for configs, scenarios, results and reports. Field names are
// snake_case, angles in degrees, everything else SI.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "risadmit/experiment.hpp"
#include "risadmit/oracle.hpp"

namespace risadmit {

using nlohmann::json;

void to_json(json& j, const Point3& p);
void from_json(const json& j, Point3& p);
void to_json(json& j, const ServiceClass& c);
void to_json(json& j, const UserRequest& u);
void from_json(const json& j, UserRequest& u);
void to_json(json& j, const Scenario& s);
void from_json(const json& j, Scenario& s);
void to_json(json& j, const ChannelConfig& c);
void to_json(json& j, const AdmissionConfig& c);
void to_json(json& j, const UserDecision& d);
void to_json(json& j, const AdmissionResult& r);
void to_json(json& j, const Metrics& m);
void to_json(json& j, const OracleResult& r);
void to_json(json& j, const ExperimentReport& r);
void from_json(const json& j, ExperimentReport& r);

// Config documents: scenario fields at the top level, plus optional
// "classes", "channel", "admission" and "sweep" objects. Absent fields keep
// their defaults; unknown fields are rejected with InvalidConfig.
RunConfig run_config_from_json(const json& j);
SweepConfig sweep_config_from_json(const json& j);
json to_json(const RunConfig& c);
json to_json(const SweepConfig& c);

// Reads and parses a file. Throws IoError if unreadable, InvalidConfig if
// malformed.
json read_json_file(const std::filesystem::path& path);
// Writes `text` atomically enough for our purposes; throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Canonical serialization used for every output file.
std::string dump(const json& j);

}  // namespace risadmit
