#pragma once

#include <optional>
#include <vector>

#include "risadmit/workload.hpp"

namespace risadmit {

// Deterministic log-distance link budget. No fading. Direct links longer
// than `los_radius` are treated as NLOS and attenuated by the blockage
// penalty; the BS-RIS-user cascade is always unobstructed.
struct ChannelConfig {
  double carrier_frequency = 28e9;        // Hz, informational only
  double noise_power_density = 4e-21;     // W/Hz
  double tx_power = 3.5e-3;               // W
  double pathloss_exponent_direct = 3.0;
  double pathloss_exponent_ris = 2.0;
  double direct_blockage_penalty_db = 47.0;
  double ris_element_gain = 2.3;          // per-element amplitude factor
  double los_radius = 160.0;              // m

  void validate() const;
  friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

struct LinkRate {
  double bps = 0.0;
};

// Everything the rate model needs about one user, independent of how many
// RIS elements end up serving it.
struct LinkProfile {
  double bandwidth = 0.0;      // Hz
  double snr_direct = 0.0;
  double snr_ris_unit = 0.0;   // cascade SNR for a single element (r = 1)
};

LinkProfile link_profile_from_distances(double bandwidth, double bs_user, double ris_user,
                                        double bs_ris, const ChannelConfig& cfg);
LinkProfile link_profile(const UserRequest& user, const Scenario& scenario, const ChannelConfig& cfg);
// Same values as link_profile() for every user, computed with the batch
// distance kernel.
std::vector<LinkProfile> link_profiles(const Scenario& scenario, const ChannelConfig& cfg);

// SNR contributed by the cascade with `elements` elements: grows as elements^2.
double ris_snr(const LinkProfile& p, int elements);
// B * log2(1 + SNR_direct + SNR_ris(elements)).
double rate_bps(const LinkProfile& p, int elements);

LinkRate direct_rate(const UserRequest& user, const Scenario& scenario, const ChannelConfig& cfg);
// Throws AllocationExceedsPanel if allocated_elements > scenario.ris_elements.
LinkRate ris_rate(const UserRequest& user, const Scenario& scenario, int allocated_elements,
                  const ChannelConfig& cfg);

// D / R. Throws ZeroRate if the rate is zero and data is pending.
double transmission_delay(double data_bits, LinkRate rate);
// C / f. Throws ZeroAllocation if f is zero.
double processing_delay(double compute_cycles, double allocated_compute);
double total_delay(double t_proc, double t_trans);

// How the MEC server sizes a per-user compute grant.
struct ComputePolicy {
  double min_slack = 1e-9;   // s; slack at or below this is treated as a missed deadline
  double min_grant = 4e11;   // cycles/s floor applied to every grant
  friend bool operator==(const ComputePolicy&, const ComputePolicy&) = default;
};

struct ComputeGrant {
  double compute = 0.0;   // f_i, cycles/s
  double t_proc = 0.0;
  double t_total = 0.0;
};

// Smallest grant (subject to min_grant) that finishes processing by the
// deadline: f = max(min_grant, C / (deadline - t_trans)). Returns nullopt
// when the transmission alone leaves no slack. The returned t_total never
// exceeds the deadline.
std::optional<ComputeGrant> grant_compute(double compute_cycles, double t_trans, double deadline,
                                          const ComputePolicy& policy);

}  // namespace risadmit
