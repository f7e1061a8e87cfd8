#include "risadmit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "risadmit/errors.hpp"

namespace risadmit {

namespace {

// Proportional split with the largest-remainder rule, ties to the earlier
// member. Written independently of split_group_elements.
std::vector<int> proportional_shares(int total, const std::vector<int>& weights) {
  std::vector<int> out(weights.size(), 0);
  long long weight_sum = 0;
  for (int w : weights) weight_sum += w;
  if (total <= 0 || weight_sum <= 0) return out;
  int given = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    out[k] = static_cast<int>(static_cast<long long>(total) * weights[k] / weight_sum);
    given += out[k];
  }
  while (given < total) {
    std::size_t pick = 0;
    long long pick_rem = -1;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      const long long rem = static_cast<long long>(total) * weights[k] % weight_sum;
      const bool already = out[k] > static_cast<long long>(total) * weights[k] / weight_sum;
      if (!already && rem > pick_rem) {
        pick = k;
        pick_rem = rem;
      }
    }
    ++out[pick];
    ++given;
  }
  return out;
}

struct Best {
  bool set = false;
  double objective = 0.0;
  int admitted = 0;
  std::uint64_t mask = 0;
  std::int64_t explored = 0;
  std::int64_t feasible = 0;
};

int bit_count(std::uint64_t mask) { return static_cast<int>(__builtin_popcountll(mask)); }

// Lexicographic on the decision vector (user 0 first), preferring 1 over 0.
bool lex_greater(std::uint64_t a, std::uint64_t b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const bool ai = (a >> i) & 1U;
    const bool bi = (b >> i) & 1U;
    if (ai != bi) return ai;
  }
  return false;
}

bool improves(const Best& incumbent, double objective, int admitted, std::uint64_t mask, std::size_t n) {
  if (!incumbent.set) return true;
  if (objective != incumbent.objective) return objective > incumbent.objective;
  if (admitted != incumbent.admitted) return admitted > incumbent.admitted;
  return lex_greater(mask, incumbent.mask, n);
}

}  // namespace

ExhaustiveOracle::ExhaustiveOracle(const Scenario& scenario, const AdmissionConfig& config,
                                   const ChannelConfig& channel)
    : scenario_(scenario), config_(config), channel_(channel) {
  scenario.validate();
  config.validate();
  channel.validate();
  const std::size_t n = scenario.users.size();

  CandidateSet candidates;
  if (config.ris_enabled) {
    const AngleDeg range(config.theta_range_deg);
    for (std::size_t i = 0; i < n; ++i) {
      const AngleDeg theta =
          angular_deviation(scenario.ris_position, scenario.bs_position, scenario.users[i].position);
      if (theta <= range) candidates.members.push_back({static_cast<int>(i), theta.value()});
    }
  }
  groups_ = allocate_ris(form_groups(build_priority_queue(candidates, scenario.users),
                                     scenario.users, AngleDeg(config.theta_max_deg),
                                     {config.max_group_size, scenario.bandwidth_capacity}),
                         scenario.ris_elements);
  group_of_.assign(n, -1);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (int m : groups_[g].members) group_of_[static_cast<std::size_t>(m)] = static_cast<int>(g);
  }
  rate_max_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int g = group_of_[i];
    rate_max_[i] = rate_for(i, g < 0 ? 0 : groups_[static_cast<std::size_t>(g)].elements);
  }
}

double ExhaustiveOracle::rate_for(std::size_t user, int elements) const {
  const UserRequest& u = scenario_.users[user];
  return elements == 0 ? direct_rate(u, scenario_, channel_).bps
                       : ris_rate(u, scenario_, elements, channel_).bps;
}

SubsetScore ExhaustiveOracle::score(const std::vector<std::uint8_t>& admitted) const {
  const auto& users = scenario_.users;
  const std::size_t n = users.size();
  if (admitted.size() != n) throw MismatchedInputs("decision vector length differs from user count");
  const UtilityWeights& w = config_.weights;

  std::vector<int> share(n, 0);
  for (const Group& g : groups_) {
    std::vector<int> members;
    std::vector<int> weights;
    for (int m : g.members) {
      if (admitted[static_cast<std::size_t>(m)]) {
        members.push_back(m);
        weights.push_back(users[static_cast<std::size_t>(m)].priority);
      }
    }
    const std::vector<int> split = proportional_shares(g.elements, weights);
    for (std::size_t k = 0; k < members.size(); ++k) share[static_cast<std::size_t>(members[k])] = split[k];
  }

  SubsetScore out;
  out.feasible = true;
  out.decisions.resize(n);
  double served = 0.0;
  double rejected_priority = 0.0;
  double all_priority = 0.0;
  double compute_sum = 0.0;
  double bandwidth_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const UserRequest& u = users[i];
    UserDecision& d = out.decisions[i];
    d.user_id = u.id;
    all_priority += u.priority;
    if (!admitted[i]) {
      rejected_priority += u.priority;
      continue;
    }
    d.admitted = true;
    const int elements = group_of_[i] >= 0 ? share[i] : 0;
    d.rate = rate_for(i, elements);
    d.ris = elements > 0;
    d.elements = elements;
    const auto grant = d.rate > 0.0 ? grant_compute(u.compute_demand, u.data_size / d.rate, u.deadline,
                                                    config_.compute)
                                    : std::nullopt;
    if (grant) {
      d.compute = grant->compute;
      d.delay = grant->t_total;
    } else {
      out.feasible = false;
      d.delay = std::numeric_limits<double>::infinity();
    }
    const double delay_term = d.delay < u.deadline ? 1.0 - d.delay / u.deadline : 0.0;
    if (rate_max_[i] > 0.0) {
      d.utility = w.alpha1 * (d.rate / rate_max_[i]) + w.alpha2 * delay_term;
    } else {
      out.feasible = false;
    }
    served += u.priority * d.utility;
    compute_sum += d.compute;
    bandwidth_sum += u.bandwidth_demand;
  }
  if (compute_sum > scenario_.mec_capacity || bandwidth_sum > scenario_.bandwidth_capacity) {
    out.feasible = false;
  }

  double ris_term = 0.0;
  if (scenario_.ris_elements > 0 && !groups_.empty()) {
    double numerator = 0.0;
    double group_weight = 0.0;
    for (const Group& g : groups_) {
      int used = 0;
      for (int m : g.members) used += out.decisions[static_cast<std::size_t>(m)].elements;
      numerator += static_cast<double>(g.priority) * used;
      group_weight += g.priority;
    }
    ris_term = numerator / (group_weight * scenario_.ris_elements);
  }
  const double penalty = all_priority > 0.0 ? rejected_priority / all_priority : 0.0;
  out.objective = w.gamma1 * served + w.gamma2 * ris_term - w.gamma3 * penalty;
  return out;
}

OracleResult ExhaustiveOracle::solve(const OracleOptions& options) const {
  const std::size_t n = scenario_.users.size();
  if (static_cast<int>(n) > options.max_users || n > 62) {
    throw InstanceTooLarge(std::to_string(n) + " users exceeds the oracle cap of " +
                           std::to_string(options.max_users));
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  const int workers = std::max(1, options.workers);

  auto scan = [&](std::uint64_t begin, std::uint64_t end) {
    Best best;
    std::vector<std::uint8_t> x(n);
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      if (options.prune) {
        double bandwidth = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if ((mask >> i) & 1U) bandwidth += scenario_.users[i].bandwidth_demand;
        }
        if (bandwidth > scenario_.bandwidth_capacity) continue;
      }
      for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1U;
      ++best.explored;
      const SubsetScore s = score(x);
      if (!s.feasible) continue;
      ++best.feasible;
      const int count = bit_count(mask);
      if (improves(best, s.objective, count, mask, n)) {
        best.set = true;
        best.objective = s.objective;
        best.admitted = count;
        best.mask = mask;
      }
    }
    return best;
  };

  std::vector<Best> partial(static_cast<std::size_t>(workers));
  if (workers == 1) {
    partial[0] = scan(0, total);
  } else {
    std::vector<std::jthread> threads;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (int k = 0; k < workers; ++k) {
      const std::uint64_t begin = std::min(total, chunk * k);
      const std::uint64_t end = std::min(total, begin + chunk);
      threads.emplace_back([&, k, begin, end] { partial[static_cast<std::size_t>(k)] = scan(begin, end); });
    }
  }

  Best merged;
  for (const Best& b : partial) {
    merged.explored += b.explored;
    merged.feasible += b.feasible;
    if (b.set && improves(merged, b.objective, b.admitted, b.mask, n)) {
      merged.set = true;
      merged.objective = b.objective;
      merged.admitted = b.admitted;
      merged.mask = b.mask;
    }
  }

  OracleResult result;
  result.explored_count = merged.explored;
  result.feasible_count = merged.feasible;
  std::vector<std::uint8_t> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (merged.mask >> i) & 1U;
  const SubsetScore s = score(x);
  result.best_objective = s.objective;
  result.best_decisions = s.decisions;
  return result;
}

OracleResult exhaustive_optimal(const Scenario& scenario, const AdmissionConfig& config,
                                const ChannelConfig& channel, const OracleOptions& options) {
  if (static_cast<int>(scenario.users.size()) > options.max_users) {
    throw InstanceTooLarge(std::to_string(scenario.users.size()) + " users exceeds the oracle cap of " +
                           std::to_string(options.max_users));
  }
  return ExhaustiveOracle(scenario, config, channel).solve(options);
}

}  // namespace risadmit
