#pragma once

// Exhaustive admission solver for small instances. It enumerates every
// admission subset and scores it with its own implementation of the
// objective, sharing only the grouping pipeline and the channel model with
// the admission module.

#include <cstdint>
#include <vector>

#include "risadmit/admission.hpp"

namespace risadmit {

struct OracleOptions {
  int max_users = 12;
  bool prune = false;  // skip subsets whose bandwidth sum already exceeds B_max
  int workers = 1;
};

struct OracleResult {
  double best_objective = 0.0;
  std::vector<UserDecision> best_decisions;  // x, z, r, f, R, T, U per user
  std::int64_t explored_count = 0;           // subsets evaluated
  std::int64_t feasible_count = 0;
};

struct SubsetScore {
  double objective = 0.0;
  bool feasible = false;
  std::vector<UserDecision> decisions;
};

class ExhaustiveOracle {
 public:
  ExhaustiveOracle(const Scenario& scenario, const AdmissionConfig& config, const ChannelConfig& channel);

  // Scores one admission vector (1 = admit). Infeasible vectors still get an
  // objective value: users that miss their deadline contribute U_delay = 0.
  SubsetScore score(const std::vector<std::uint8_t>& admitted) const;

  OracleResult solve(const OracleOptions& options) const;

 private:
  double rate_for(std::size_t user, int elements) const;

  const Scenario& scenario_;
  AdmissionConfig config_;
  ChannelConfig channel_;
  std::vector<int> group_of_;
  std::vector<Group> groups_;
  std::vector<double> rate_max_;  // per user
};

// Throws InstanceTooLarge if the scenario has more than options.max_users users.
OracleResult exhaustive_optimal(const Scenario& scenario, const AdmissionConfig& config,
                                const ChannelConfig& channel, const OracleOptions& options = {});

}  // namespace risadmit
