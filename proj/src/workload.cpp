#include "risadmit/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "risadmit/errors.hpp"

namespace risadmit {

namespace {

// One mt19937_64 stream; its output sequence is fixed by the standard, and
// the conversions below avoid the implementation-defined std distributions.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(const Range& r) { return r.min + (r.max - r.min) * unit(); }

  // Uniform integer in [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % bound;
  }

 private:
  std::mt19937_64 engine_;
};

void check_range(const Range& r, const std::string& field) {
  if (!(std::isfinite(r.min) && std::isfinite(r.max) && r.min > 0.0 && r.min <= r.max)) {
    throw InvalidConfig(field + ": range must satisfy 0 < min <= max");
  }
}

void check_point(const Point3& p, const std::string& field) {
  if (!p.finite()) throw InvalidConfig(field + ": coordinates must be finite");
}

}  // namespace

std::string_view service_name(ServiceKind kind) {
  switch (kind) {
    case ServiceKind::kEurllc:
      return "eURLLC";
    case ServiceKind::kFembb:
      return "feMBB";
    case ServiceKind::kUmmtc:
      return "umMTC";
  }
  return "unknown";
}

ServiceKind parse_service(std::string_view name) {
  for (ServiceKind k : kAllServiceKinds) {
    if (service_name(k) == name) return k;
  }
  throw InvalidConfig("unknown service class '" + std::string(name) + "'");
}

std::array<ServiceClass, 3> default_service_classes() {
  return {{
      {ServiceKind::kEurllc, 3, {1e-3, 10e-3}, {1e8, 5e8}, {1e3, 1e4}, {1e6, 5e6}},
      {ServiceKind::kFembb, 2, {50e-3, 200e-3}, {5e8, 2e9}, {5e5, 5e6}, {10e6, 50e6}},
      {ServiceKind::kUmmtc, 1, {100e-3, 1000e-3}, {1e7, 1e8}, {2e6, 2e7}, {0.1e6, 1e6}},
  }};
}

void ScenarioConfig::validate() const {
  if (user_count < 1) throw InvalidConfig("user_count: must be >= 1");
  if (sector_count != 2 && sector_count != 3) throw InvalidConfig("sector_count: must be 2 or 3");
  if (!(congestion_ratio > 0.0 && std::isfinite(congestion_ratio))) {
    throw InvalidConfig("congestion_ratio: must be positive");
  }
  if (!(arrival_horizon >= 0.0 && std::isfinite(arrival_horizon))) {
    throw InvalidConfig("arrival_horizon: must be nonnegative");
  }
  if (!(inner_radius >= 0.0 && outer_radius > inner_radius && std::isfinite(outer_radius))) {
    throw InvalidConfig("outer_radius: must exceed inner_radius >= 0");
  }
  if (!std::isfinite(user_height)) throw InvalidConfig("user_height: must be finite");
  check_point(bs_position, "bs_position");
  if (!(ris_distance > 0.0 && std::isfinite(ris_distance))) {
    throw InvalidConfig("ris_distance: must be positive");
  }
  if (!std::isfinite(ris_height)) throw InvalidConfig("ris_height: must be finite");
  if (ris_elements < 0) throw InvalidConfig("ris_elements: must be >= 0");
  if (!(mec_capacity > 0.0 && std::isfinite(mec_capacity))) {
    throw InvalidConfig("mec_capacity: must be positive");
  }
  if (!(bandwidth_capacity > 0.0 && std::isfinite(bandwidth_capacity))) {
    throw InvalidConfig("bandwidth_capacity: must be positive");
  }
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const ServiceClass& c = classes[k];
    const std::string name = "classes." + std::string(service_name(kAllServiceKinds[k]));
    if (c.kind != kAllServiceKinds[k]) throw InvalidConfig(name + ": kind out of order");
    if (c.priority < 1) throw InvalidConfig(name + ".priority: must be >= 1");
    check_range(c.deadline_s, name + ".deadline_s");
    check_range(c.compute_cycles, name + ".compute_cycles");
    check_range(c.data_bits, name + ".data_bits");
    check_range(c.bandwidth_hz, name + ".bandwidth_hz");
  }
  if (!(classes[0].priority > classes[1].priority && classes[1].priority > classes[2].priority)) {
    throw InvalidConfig("classes: priorities must satisfy eURLLC > feMBB > umMTC");
  }
}

void Scenario::validate() const {
  if (sector_count != 2 && sector_count != 3) throw InvalidConfig("sector_count: must be 2 or 3");
  if (ris_elements < 0) throw InvalidConfig("ris_elements: must be >= 0");
  if (!(mec_capacity > 0.0)) throw InvalidConfig("mec_capacity: must be positive");
  if (!(bandwidth_capacity > 0.0)) throw InvalidConfig("bandwidth_capacity: must be positive");
  check_point(bs_position, "bs_position");
  check_point(ris_position, "ris_position");
  if (bs_position == ris_position) throw InvalidConfig("ris_position: coincides with the BS");
  std::unordered_set<int> ids;
  for (const UserRequest& u : users) {
    const std::string name = "users[" + std::to_string(u.id) + "]";
    if (!ids.insert(u.id).second) throw InvalidConfig(name + ": duplicate id");
    check_point(u.position, name + ".position");
    if (u.position == bs_position || u.position == ris_position) {
      throw InvalidConfig(name + ".position: coincides with BS or RIS");
    }
    if (u.priority < 1) throw InvalidConfig(name + ".priority: must be >= 1");
    if (!(u.compute_demand > 0.0 && u.bandwidth_demand > 0.0 && u.data_size > 0.0)) {
      throw InvalidConfig(name + ": demands must be positive");
    }
    if (!(u.deadline > 0.0)) throw InvalidConfig(name + ".deadline: must be positive");
    if (!(u.arrival_time >= 0.0)) throw InvalidConfig(name + ".arrival_time: must be >= 0");
    if (u.sector < 0 || u.sector >= sector_count) throw InvalidConfig(name + ".sector: out of range");
  }
}

std::vector<int> largest_remainder(int total, const std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<int> counts(weights.size(), 0);
  if (weights.empty() || !(sum > 0.0)) return counts;
  std::vector<double> remainders(weights.size());
  int assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double quota = static_cast<double>(total) * weights[i] / sum;
    counts[i] = static_cast<int>(std::floor(quota));
    remainders[i] = quota - counts[i];
    assigned += counts[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size(), ++assigned) {
    ++counts[order[k]];
  }
  return counts;
}

std::array<int, 3> service_mix_counts(int n_total) {
  if (n_total < 1) throw InvalidConfig("user_count: must be >= 1");
  const auto c = largest_remainder(n_total, {2.0, 6.0, 1.0});
  return {c[0], c[1], c[2]};
}

std::vector<int> sector_counts(int n_total, int sector_count, double congestion_ratio) {
  if (sector_count != 2 && sector_count != 3) throw InvalidConfig("sector_count: must be 2 or 3");
  if (!(congestion_ratio > 0.0)) throw InvalidConfig("congestion_ratio: must be positive");
  if (n_total < 0) throw InvalidConfig("user_count: must be >= 0");
  std::vector<double> weights(static_cast<std::size_t>(sector_count), 1.0);
  weights[0] = congestion_ratio;
  return largest_remainder(n_total, weights);
}

Point3 ris_position_for(const ScenarioConfig& config) {
  const double bisector = std::numbers::pi / config.sector_count;  // half of sector 0's wedge
  return {config.bs_position.x + config.ris_distance * std::cos(bisector),
          config.bs_position.y + config.ris_distance * std::sin(bisector), config.ris_height};
}

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();

  Scenario s;
  s.bs_position = config.bs_position;
  s.ris_position = ris_position_for(config);
  s.ris_elements = config.ris_elements;
  s.mec_capacity = config.mec_capacity;
  s.bandwidth_capacity = config.bandwidth_capacity;
  s.sector_count = config.sector_count;
  s.seed = seed;

  const int n = config.user_count;
  Stream rng(seed);

  // 1. classes: counts by ratio, then a Fisher-Yates shuffle.
  std::vector<ServiceKind> kinds;
  kinds.reserve(static_cast<std::size_t>(n));
  const auto mix = service_mix_counts(n);
  for (std::size_t k = 0; k < 3; ++k) kinds.insert(kinds.end(), mix[k], kAllServiceKinds[k]);
  for (std::size_t i = kinds.size(); i > 1; --i) {
    std::swap(kinds[i - 1], kinds[rng.below(i)]);
  }

  // 2. sectors: contiguous blocks, sector 0 first.
  std::vector<int> sectors;
  sectors.reserve(static_cast<std::size_t>(n));
  const auto per_sector = sector_counts(n, config.sector_count, config.congestion_ratio);
  for (int k = 0; k < config.sector_count; ++k) sectors.insert(sectors.end(), per_sector[k], k);

  // 3. per-user fields, in a fixed draw order.
  const double wedge = 2.0 * std::numbers::pi / config.sector_count;
  const double r_in2 = config.inner_radius * config.inner_radius;
  const double r_out2 = config.outer_radius * config.outer_radius;
  s.users.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    UserRequest u;
    u.id = i;
    u.service = kinds[static_cast<std::size_t>(i)];
    u.sector = sectors[static_cast<std::size_t>(i)];
    const ServiceClass& cls = config.classes[static_cast<std::size_t>(u.service)];
    u.priority = cls.priority;

    const double radius = std::sqrt(r_in2 + (r_out2 - r_in2) * rng.unit());
    const double azimuth = (u.sector + rng.unit()) * wedge;
    u.position = {config.bs_position.x + radius * std::cos(azimuth),
                  config.bs_position.y + radius * std::sin(azimuth), config.user_height};
    u.arrival_time = config.arrival_horizon * rng.unit();
    u.compute_demand = rng.uniform(cls.compute_cycles);
    u.bandwidth_demand = rng.uniform(cls.bandwidth_hz);
    u.data_size = rng.uniform(cls.data_bits);
    u.deadline = rng.uniform(cls.deadline_s);
    s.users.push_back(u);
  }
  return s;
}

}  // namespace risadmit
