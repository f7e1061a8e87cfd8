#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "risadmit/geometry.hpp"

namespace risadmit {

enum class ServiceKind { kEurllc = 0, kFembb = 1, kUmmtc = 2 };

inline constexpr std::array<ServiceKind, 3> kAllServiceKinds = {
    ServiceKind::kEurllc, ServiceKind::kFembb, ServiceKind::kUmmtc};

std::string_view service_name(ServiceKind kind);
// Throws InvalidConfig for unknown names.
ServiceKind parse_service(std::string_view name);

struct Range {
  double min = 0.0;
  double max = 0.0;
  friend bool operator==(const Range&, const Range&) = default;
};

// Class-level QoS envelope. Per-user demands are drawn uniformly from these.
struct ServiceClass {
  ServiceKind kind = ServiceKind::kEurllc;
  int priority = 1;
  Range deadline_s;
  Range compute_cycles;
  Range data_bits;
  Range bandwidth_hz;
  friend bool operator==(const ServiceClass&, const ServiceClass&) = default;
};

std::array<ServiceClass, 3> default_service_classes();

struct UserRequest {
  int id = 0;
  Point3 position;
  ServiceKind service = ServiceKind::kEurllc;
  int priority = 1;
  double arrival_time = 0.0;   // s
  double compute_demand = 0.0; // CPU cycles
  double bandwidth_demand = 0.0;  // Hz
  double data_size = 0.0;      // bits
  double deadline = 0.0;       // s
  int sector = 0;
  friend bool operator==(const UserRequest&, const UserRequest&) = default;
};

struct ScenarioConfig {
  int user_count = 500;
  int sector_count = 3;
  double congestion_ratio = 3.0;
  double arrival_horizon = 1.0;  // s

  // Users occupy an annulus around the BS, split into equal azimuth wedges;
  // sector k covers [k, k+1) * 360/sector_count degrees.
  double inner_radius = 10.0;
  double outer_radius = 250.0;
  double user_height = 1.5;

  Point3 bs_position{0.0, 0.0, 25.0};
  // The RIS sits on Sector 0's bisector, this far (horizontally) from the BS.
  double ris_distance = 160.0;
  double ris_height = 30.0;
  int ris_elements = 1024;

  double mec_capacity = 1.5e14;        // cycles/s
  double bandwidth_capacity = 6.0e9;   // Hz

  std::array<ServiceClass, 3> classes = default_service_classes();

  // Throws InvalidConfig naming the first offending field.
  void validate() const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct Scenario {
  Point3 bs_position;
  Point3 ris_position;
  int ris_elements = 0;
  double mec_capacity = 0.0;
  double bandwidth_capacity = 0.0;
  int sector_count = 2;
  std::vector<UserRequest> users;
  std::uint64_t seed = 0;

  // Throws InvalidConfig if any structural invariant is broken.
  void validate() const;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Splits n_total users 2:6:1 across eURLLC/feMBB/umMTC by largest remainder.
std::array<int, 3> service_mix_counts(int n_total);

// Sector 0 carries `congestion_ratio` times the weight of each other sector.
std::vector<int> sector_counts(int n_total, int sector_count, double congestion_ratio);

Point3 ris_position_for(const ScenarioConfig& config);

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed);

// Apportions `total` units over `weights` by the largest-remainder method.
// Ties go to the lower index. Weights must be nonnegative with positive sum.
std::vector<int> largest_remainder(int total, const std::vector<double>& weights);

}  // namespace risadmit
