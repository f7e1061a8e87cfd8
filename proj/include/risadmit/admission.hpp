#pragma once

// RIS-enhanced admission control: angular candidate filtering, priority
// queueing, angular grouping, proportional element allocation, and a greedy
// loop that admits the user with the largest marginal objective gain.
//
// Indices: CandidateSet, Group and the per-user decision vectors refer to
// users by their position in Scenario::users. Only AdmissionResult carries
// user ids.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "risadmit/channel.hpp"
#include "risadmit/geometry.hpp"
#include "risadmit/workload.hpp"

namespace risadmit {

struct UtilityWeights {
  double alpha1 = 0.5;  // rate
  double alpha2 = 0.5;  // delay
  double gamma1 = 1.0;  // priority-weighted user utility
  double gamma2 = 0.5;  // RIS resource utility
  double gamma3 = 0.5;  // rejection penalty

  // All nonnegative, alpha1 + alpha2 == 1 (to 1e-12).
  void validate() const;
  friend bool operator==(const UtilityWeights&, const UtilityWeights&) = default;
};

struct AdmissionConfig {
  bool ris_enabled = true;
  double theta_range_deg = 60.0;
  double theta_max_deg = 15.0;
  int max_group_size = 16;
  UtilityWeights weights;
  ComputePolicy compute;

  void validate() const;
  friend bool operator==(const AdmissionConfig&, const AdmissionConfig&) = default;
};

struct Candidate {
  int index = 0;          // into Scenario::users
  double theta_deg = 0.0;
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct CandidateSet {
  std::vector<Candidate> members;  // input order
};

struct GroupCaps {
  int max_size = 16;
  double bandwidth_limit = std::numeric_limits<double>::infinity();
};

struct Group {
  int id = 0;
  int leader = 0;                // user index
  double base_angle_deg = 0.0;
  std::vector<int> members;      // user indices, leader first, queue order
  int priority = 0;              // sum of member priorities
  int elements = 0;              // RIS share r
  friend bool operator==(const Group&, const Group&) = default;
};

struct UserDecision {
  int user_id = 0;
  bool admitted = false;   // x_i
  bool ris = false;        // z_i
  int elements = 0;        // r_i, zero unless z_i
  double compute = 0.0;    // f_i, cycles/s
  double rate = 0.0;       // R_i, bps
  double delay = 0.0;      // T_i, s
  double utility = 0.0;    // U_i
  friend bool operator==(const UserDecision&, const UserDecision&) = default;
};

struct AdmissionResult {
  std::vector<UserDecision> users;  // same order as Scenario::users
  double objective = 0.0;
  double ris_utility = 0.0;
  double penalty = 0.0;
  double residual_compute = 0.0;
  double residual_bandwidth = 0.0;
  int residual_elements = 0;
  friend bool operator==(const AdmissionResult&, const AdmissionResult&) = default;
};

// ---- pipeline stages ------------------------------------------------------

// Angular deviation of every user (degrees), via the batch kernels.
std::vector<double> user_angles(const Scenario& scenario);

// Users with theta <= range (inclusive), in input order.
CandidateSet filter_candidates(std::span<const double> theta_deg, AngleDeg theta_range);

// Sorted by (-P, t, id).
std::vector<Candidate> build_priority_queue(const CandidateSet& candidates,
                                            std::span<const UserRequest> users);

// Greedy angular sweep: the queue head leads a new group; later queue
// members join while |theta - theta_leader| <= theta_max and the caps hold.
std::vector<Group> form_groups(std::span<const Candidate> queue, std::span<const UserRequest> users,
                               AngleDeg theta_max, const GroupCaps& caps);

// r_k = floor(P_k / sum(P) * M); leftover elements one at a time by
// descending P_k, ties to the earlier group. Empty input yields empty output.
std::vector<Group> allocate_ris(std::vector<Group> groups, int total_elements);

// Splits a group's share over its admitted members in proportion to their
// priorities (largest remainder, ties to the earlier member).
std::vector<int> split_group_elements(int group_elements, std::span<const int> member_priorities);

// ---- objective terms ------------------------------------------------------

// alpha1 * R/R_best + alpha2 * max(0, 1 - T/T_max). Throws InvalidNormalizer
// when r_max <= 0. R_best is the user's own rate with its group's full RIS share.
double user_utility(double rate, double r_max, double delay, double deadline,
                    const UtilityWeights& weights);

// sum_g P_g * sum_{i in g} z_i r_i, normalized by M * sum_g P_g. Zero when
// there are no groups or no elements.
double ris_resource_utility(std::span<const Group> groups, std::span<const std::uint8_t> z,
                            std::span<const int> r, int total_elements);

// sum (1 - x_i) P_i / sum P_i; zero for an empty population.
double rejection_penalty(std::span<const std::uint8_t> x, std::span<const int> priorities);

// gamma1 * sum P_i x_i U_i + gamma2 * R_RIS - gamma3 * Penalty.
double objective(std::span<const double> utilities, std::span<const std::uint8_t> x,
                 std::span<const std::uint8_t> z, std::span<const int> r, std::span<const Group> groups,
                 std::span<const int> priorities, int total_elements, const UtilityWeights& weights);

// ---- full runs --------------------------------------------------------------

// Everything the greedy loop consumes, derived deterministically from the
// scenario and configuration.
struct AdmissionPlan {
  std::vector<double> theta_deg;     // per user
  CandidateSet candidates;
  std::vector<Candidate> queue;
  std::vector<Group> groups;         // elements already allocated
  std::vector<int> group_of;         // per user, -1 for direct-only users
  std::vector<LinkProfile> links;    // per user
  std::vector<double> rate_normalizer;  // per user: rate with the group's full share
  double total_priority = 0.0;       // P_max
};

AdmissionPlan plan_admission(const Scenario& scenario, const AdmissionConfig& config,
                             const ChannelConfig& channel);

AdmissionResult greedy_admission(const Scenario& scenario, const AdmissionPlan& plan,
                                 const AdmissionConfig& config);

AdmissionResult run_admission_control(const Scenario& scenario, const AdmissionConfig& config,
                                      const ChannelConfig& channel);

struct DecisionEvaluation {
  AdmissionResult result;
  bool feasible = false;  // every admitted user meets its deadline and all capacities hold
};

// Evaluates an arbitrary admission vector through the same state model the
// greedy loop uses. Admitted users that cannot meet their deadline get
// T = +inf (U_delay clamps to 0) and f = 0, and make the vector infeasible.
DecisionEvaluation evaluate_decisions(const Scenario& scenario, const AdmissionPlan& plan,
                                      const AdmissionConfig& config, std::span<const std::uint8_t> x);

}  // namespace risadmit
