#include "risadmit/channel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "risadmit/errors.hpp"
#include "risadmit/kernels.hpp"

namespace risadmit {

void ChannelConfig::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0 && std::isfinite(v))) {
      throw InvalidConfig(std::string("channel.") + field + ": must be positive");
    }
  };
  positive(carrier_frequency, "carrier_frequency");
  positive(noise_power_density, "noise_power_density");
  positive(tx_power, "tx_power");
  positive(direct_blockage_penalty_db, "direct_blockage_penalty_db");
  positive(ris_element_gain, "ris_element_gain");
  positive(los_radius, "los_radius");
  for (auto [v, field] : {std::pair{pathloss_exponent_direct, "pathloss_exponent_direct"},
                          std::pair{pathloss_exponent_ris, "pathloss_exponent_ris"}}) {
    if (!(v >= 2.0 && v <= 6.0)) {
      throw InvalidConfig(std::string("channel.") + field + ": must lie in [2, 6]");
    }
  }
}

LinkProfile link_profile_from_distances(double bandwidth, double bs_user, double ris_user,
                                        double bs_ris, const ChannelConfig& cfg) {
  if (!(bs_user > 0.0)) throw DegenerateGeometry("user coincides with the BS");
  const double noise = cfg.noise_power_density * bandwidth;
  const double blockage =
      bs_user > cfg.los_radius ? std::pow(10.0, -cfg.direct_blockage_penalty_db / 10.0) : 1.0;

  LinkProfile p;
  p.bandwidth = bandwidth;
  p.snr_direct = cfg.tx_power * std::pow(bs_user, -cfg.pathloss_exponent_direct) * blockage / noise;
  if (ris_user > 0.0 && bs_ris > 0.0) {
    const double g2 = cfg.ris_element_gain * cfg.ris_element_gain;
    p.snr_ris_unit = cfg.tx_power * g2 * std::pow(bs_ris, -cfg.pathloss_exponent_ris) *
                     std::pow(ris_user, -cfg.pathloss_exponent_ris) / noise;
  }
  return p;
}

LinkProfile link_profile(const UserRequest& user, const Scenario& scenario, const ChannelConfig& cfg) {
  return link_profile_from_distances(user.bandwidth_demand, distance(scenario.bs_position, user.position),
                                     distance(scenario.ris_position, user.position),
                                     distance(scenario.bs_position, scenario.ris_position), cfg);
}

std::vector<LinkProfile> link_profiles(const Scenario& scenario, const ChannelConfig& cfg) {
  const std::size_t n = scenario.users.size();
  std::vector<double> xs(n), ys(n), zs(n), d_bs(n), d_ris(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = scenario.users[i].position.x;
    ys[i] = scenario.users[i].position.y;
    zs[i] = scenario.users[i].position.z;
  }
  const kernels::PointsView pts{xs, ys, zs};
  const auto& b = scenario.bs_position;
  const auto& r = scenario.ris_position;
  kernels::distances({b.x, b.y, b.z}, pts, d_bs);
  kernels::distances({r.x, r.y, r.z}, pts, d_ris);
  const double bs_ris = distance(scenario.bs_position, scenario.ris_position);

  std::vector<LinkProfile> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(
        link_profile_from_distances(scenario.users[i].bandwidth_demand, d_bs[i], d_ris[i], bs_ris, cfg));
  }
  return out;
}

double ris_snr(const LinkProfile& p, int elements) {
  const double r = static_cast<double>(elements);
  return p.snr_ris_unit * (r * r);
}

double rate_bps(const LinkProfile& p, int elements) {
  return p.bandwidth * std::log2(1.0 + p.snr_direct + ris_snr(p, elements));
}

LinkRate direct_rate(const UserRequest& user, const Scenario& scenario, const ChannelConfig& cfg) {
  return {rate_bps(link_profile(user, scenario, cfg), 0)};
}

LinkRate ris_rate(const UserRequest& user, const Scenario& scenario, int allocated_elements,
                  const ChannelConfig& cfg) {
  if (allocated_elements < 0) throw InvalidConfig("allocated_elements: must be >= 0");
  if (allocated_elements > scenario.ris_elements) {
    throw AllocationExceedsPanel("allocated " + std::to_string(allocated_elements) +
                                 " elements on a panel of " + std::to_string(scenario.ris_elements));
  }
  return {rate_bps(link_profile(user, scenario, cfg), allocated_elements)};
}

double transmission_delay(double data_bits, LinkRate rate) {
  if (data_bits == 0.0) return 0.0;
  if (!(rate.bps > 0.0)) throw ZeroRate("link has zero rate; user unreachable");
  return data_bits / rate.bps;
}

double processing_delay(double compute_cycles, double allocated_compute) {
  if (compute_cycles == 0.0) return 0.0;
  if (!(allocated_compute > 0.0)) throw ZeroAllocation("no compute allocated");
  return compute_cycles / allocated_compute;
}

double total_delay(double t_proc, double t_trans) { return t_proc + t_trans; }

std::optional<ComputeGrant> grant_compute(double compute_cycles, double t_trans, double deadline,
                                          const ComputePolicy& policy) {
  const double slack = deadline - t_trans;
  if (!(slack > policy.min_slack)) return std::nullopt;
  double f = std::max(policy.min_grant, compute_cycles / slack);
  double t_proc = compute_cycles / f;
  double t_total = total_delay(t_proc, t_trans);
  // Rounding in C/f + t_trans can overshoot the deadline by an ulp.
  while (t_total > deadline) {
    f = std::nextafter(f, std::numeric_limits<double>::infinity());
    t_proc = compute_cycles / f;
    t_total = total_delay(t_proc, t_trans);
  }
  return ComputeGrant{f, t_proc, t_total};
}

}  // namespace risadmit
