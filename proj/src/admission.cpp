#include "risadmit/admission.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>

#include "risadmit/errors.hpp"
#include "risadmit/kernels.hpp"

namespace risadmit {

void UtilityWeights::validate() const {
  for (auto [v, field] : {std::pair{alpha1, "alpha1"}, std::pair{alpha2, "alpha2"},
                          std::pair{gamma1, "gamma1"}, std::pair{gamma2, "gamma2"},
                          std::pair{gamma3, "gamma3"}}) {
    if (!(v >= 0.0 && std::isfinite(v))) {
      throw InvalidConfig(std::string("weights.") + field + ": must be nonnegative");
    }
  }
  if (std::abs(alpha1 + alpha2 - 1.0) > 1e-12) {
    throw InvalidConfig("weights.alpha1: alpha1 + alpha2 must equal 1");
  }
}

void AdmissionConfig::validate() const {
  if (!(theta_range_deg >= 0.0 && theta_range_deg <= 180.0)) {
    throw InvalidConfig("admission.theta_range_deg: must lie in [0, 180]");
  }
  if (!(theta_max_deg >= 0.0 && theta_max_deg <= 180.0)) {
    throw InvalidConfig("admission.theta_max_deg: must lie in [0, 180]");
  }
  if (max_group_size < 1) throw InvalidConfig("admission.max_group_size: must be >= 1");
  if (!(compute.min_slack >= 0.0)) throw InvalidConfig("admission.min_slack: must be >= 0");
  if (!(compute.min_grant >= 0.0 && std::isfinite(compute.min_grant))) {
    throw InvalidConfig("admission.min_compute_grant: must be >= 0");
  }
  weights.validate();
}

// ---- pipeline stages ------------------------------------------------------

std::vector<double> user_angles(const Scenario& scenario) {
  const std::size_t n = scenario.users.size();
  std::vector<double> xs(n), ys(n), zs(n), cosines(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = scenario.users[i].position.x;
    ys[i] = scenario.users[i].position.y;
    zs[i] = scenario.users[i].position.z;
  }
  const Direction3 ref = reference_direction(scenario.ris_position, scenario.bs_position);
  const Point3& o = scenario.ris_position;
  kernels::cosines_to_reference({o.x, o.y, o.z}, {ref.dx(), ref.dy(), ref.dz()}, {xs, ys, zs}, cosines);

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = cosine_to_degrees(cosines[i]);
  return out;
}

CandidateSet filter_candidates(std::span<const double> theta_deg, AngleDeg theta_range) {
  CandidateSet set;
  for (std::size_t i = 0; i < theta_deg.size(); ++i) {
    if (std::abs(theta_deg[i]) <= theta_range.value()) {
      set.members.push_back({static_cast<int>(i), theta_deg[i]});
    }
  }
  return set;
}

std::vector<Candidate> build_priority_queue(const CandidateSet& candidates,
                                            std::span<const UserRequest> users) {
  std::vector<Candidate> queue = candidates.members;
  std::sort(queue.begin(), queue.end(), [&](const Candidate& a, const Candidate& b) {
    const UserRequest& ua = users[static_cast<std::size_t>(a.index)];
    const UserRequest& ub = users[static_cast<std::size_t>(b.index)];
    if (ua.priority != ub.priority) return ua.priority > ub.priority;
    if (ua.arrival_time != ub.arrival_time) return ua.arrival_time < ub.arrival_time;
    return ua.id < ub.id;
  });
  return queue;
}

std::vector<Group> form_groups(std::span<const Candidate> queue, std::span<const UserRequest> users,
                               AngleDeg theta_max, const GroupCaps& caps) {
  std::vector<Candidate> pending(queue.begin(), queue.end());
  std::vector<Group> groups;
  while (!pending.empty()) {
    const Candidate leader = pending.front();
    pending.erase(pending.begin());

    Group g;
    g.id = static_cast<int>(groups.size());
    g.leader = leader.index;
    g.base_angle_deg = leader.theta_deg;
    g.members.push_back(leader.index);
    g.priority = users[static_cast<std::size_t>(leader.index)].priority;
    double bandwidth = users[static_cast<std::size_t>(leader.index)].bandwidth_demand;

    std::vector<Candidate> rest;
    rest.reserve(pending.size());
    for (const Candidate& c : pending) {
      const UserRequest& u = users[static_cast<std::size_t>(c.index)];
      const bool aligned = std::abs(c.theta_deg - g.base_angle_deg) <= theta_max.value();
      const bool fits = static_cast<int>(g.members.size()) < caps.max_size &&
                        bandwidth + u.bandwidth_demand <= caps.bandwidth_limit;
      if (aligned && fits) {
        g.members.push_back(c.index);
        g.priority += u.priority;
        bandwidth += u.bandwidth_demand;
      } else {
        rest.push_back(c);
      }
    }
    pending = std::move(rest);
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<Group> allocate_ris(std::vector<Group> groups, int total_elements) {
  if (groups.empty()) return groups;
  if (total_elements < 0) throw InvalidConfig("ris_elements: must be >= 0");
  long long sum = 0;
  for (const Group& g : groups) sum += g.priority;
  if (sum <= 0) throw InvalidConfig("groups: total priority must be positive");

  long long assigned = 0;
  for (Group& g : groups) {
    g.elements = static_cast<int>(static_cast<long long>(g.priority) * total_elements / sum);
    assigned += g.elements;
  }
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return groups[a].priority > groups[b].priority; });
  for (std::size_t k = 0; assigned < total_elements; k = (k + 1) % order.size(), ++assigned) {
    ++groups[order[k]].elements;
  }
  return groups;
}

std::vector<int> split_group_elements(int group_elements, std::span<const int> member_priorities) {
  const std::size_t n = member_priorities.size();
  std::vector<int> shares(n, 0);
  if (n == 0 || group_elements <= 0) return shares;
  long long sum = 0;
  for (int p : member_priorities) sum += p;
  if (sum <= 0) return shares;

  std::vector<long long> remainder(n);
  long long assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long long scaled = static_cast<long long>(group_elements) * member_priorities[i];
    shares[i] = static_cast<int>(scaled / sum);
    remainder[i] = scaled % sum;
    assigned += shares[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < group_elements; ++k, ++assigned) ++shares[order[k]];
  return shares;
}

// ---- objective terms ------------------------------------------------------

double user_utility(double rate, double r_max, double delay, double deadline,
                    const UtilityWeights& weights) {
  if (!(r_max > 0.0)) throw InvalidNormalizer("rate normalizer must be positive");
  const double u_rate = rate / r_max;
  const double u_delay = std::max(0.0, 1.0 - delay / deadline);
  return weights.alpha1 * u_rate + weights.alpha2 * u_delay;
}

double ris_resource_utility(std::span<const Group> groups, std::span<const std::uint8_t> z,
                            std::span<const int> r, int total_elements) {
  if (groups.empty() || total_elements <= 0) return 0.0;
  double weighted = 0.0;
  double priority_sum = 0.0;
  for (const Group& g : groups) {
    double used = 0.0;
    for (int m : g.members) {
      if (z[static_cast<std::size_t>(m)]) used += r[static_cast<std::size_t>(m)];
    }
    weighted += g.priority * used;
    priority_sum += g.priority;
  }
  if (!(priority_sum > 0.0)) return 0.0;
  return weighted / (static_cast<double>(total_elements) * priority_sum);
}

double rejection_penalty(std::span<const std::uint8_t> x, std::span<const int> priorities) {
  double rejected = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < priorities.size(); ++i) {
    total += priorities[i];
    if (!x[i]) rejected += priorities[i];
  }
  return total > 0.0 ? rejected / total : 0.0;
}

double objective(std::span<const double> utilities, std::span<const std::uint8_t> x,
                 std::span<const std::uint8_t> z, std::span<const int> r, std::span<const Group> groups,
                 std::span<const int> priorities, int total_elements, const UtilityWeights& weights) {
  double served = 0.0;
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    if (x[i]) served += priorities[i] * utilities[i];
  }
  return weights.gamma1 * served + weights.gamma2 * ris_resource_utility(groups, z, r, total_elements) -
         weights.gamma3 * rejection_penalty(x, priorities);
}

// ---- plan -------------------------------------------------------------------

AdmissionPlan plan_admission(const Scenario& scenario, const AdmissionConfig& config,
                             const ChannelConfig& channel) {
  scenario.validate();
  config.validate();
  channel.validate();

  AdmissionPlan plan;
  const auto& users = scenario.users;
  plan.theta_deg = user_angles(scenario);
  if (config.ris_enabled) {
    plan.candidates = filter_candidates(plan.theta_deg, AngleDeg(config.theta_range_deg));
  }
  plan.queue = build_priority_queue(plan.candidates, users);
  plan.groups = allocate_ris(form_groups(plan.queue, users, AngleDeg(config.theta_max_deg),
                                         {config.max_group_size, scenario.bandwidth_capacity}),
                             scenario.ris_elements);
  plan.group_of.assign(users.size(), -1);
  for (const Group& g : plan.groups) {
    for (int m : g.members) plan.group_of[static_cast<std::size_t>(m)] = g.id;
  }
  plan.links = link_profiles(scenario, channel);

  plan.rate_normalizer.resize(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    const int g = plan.group_of[i];
    const int best_share = g < 0 ? 0 : plan.groups[static_cast<std::size_t>(g)].elements;
    plan.rate_normalizer[i] = rate_bps(plan.links[i], best_share);
    plan.total_priority += users[i].priority;
  }
  return plan;
}

// ---- greedy -----------------------------------------------------------------

namespace {

struct MemberState {
  bool feasible = false;
  int elements = 0;
  double rate = 0.0;
  double compute = 0.0;
  double delay = 0.0;
  double utility = 0.0;
};

class StateModel {
 public:
  StateModel(const Scenario& scenario, const AdmissionPlan& plan, const AdmissionConfig& config)
      : scenario_(scenario), plan_(plan), config_(config) {
    for (const Group& g : plan.groups) {
      for (std::size_t k = 0; k < g.members.size(); ++k) {
        position_[g.members[k]] = static_cast<int>(k);
      }
    }
  }

  MemberState member(int i, int elements) const {
    const UserRequest& u = scenario_.users[static_cast<std::size_t>(i)];
    MemberState s;
    s.elements = elements;
    s.rate = rate_bps(plan_.links[static_cast<std::size_t>(i)], elements);
    std::optional<ComputeGrant> grant;
    if (s.rate > 0.0) {
      grant = grant_compute(u.compute_demand, transmission_delay(u.data_size, {s.rate}), u.deadline,
                            config_.compute);
    }
    if (grant) {
      s.feasible = true;
      s.compute = grant->compute;
      s.delay = grant->t_total;
    } else {
      s.delay = std::numeric_limits<double>::infinity();
    }
    // A link whose best rate rounds to zero cannot be served at all.
    const double best = plan_.rate_normalizer[static_cast<std::size_t>(i)];
    if (!(best > 0.0)) {
      s.feasible = false;
      return s;
    }
    s.utility = user_utility(s.rate, best, s.delay, u.deadline, config_.weights);
    return s;
  }

  // States of `admitted` (user indices in group order) sharing group g.
  std::vector<MemberState> group_members(const Group& g, std::span<const int> admitted) const {
    std::vector<int> priorities;
    priorities.reserve(admitted.size());
    for (int m : admitted) priorities.push_back(scenario_.users[static_cast<std::size_t>(m)].priority);
    const std::vector<int> shares = split_group_elements(g.elements, priorities);
    std::vector<MemberState> out;
    out.reserve(admitted.size());
    for (std::size_t k = 0; k < admitted.size(); ++k) out.push_back(member(admitted[k], shares[k]));
    return out;
  }

  int position(int user) const { return position_.at(user); }

 private:
  const Scenario& scenario_;
  const AdmissionPlan& plan_;
  const AdmissionConfig& config_;
  std::unordered_map<int, int> position_;
};

AdmissionResult assemble(const Scenario& scenario, const AdmissionPlan& plan, const AdmissionConfig& config,
                         std::span<const std::uint8_t> x, std::span<const MemberState> states) {
  const std::size_t n = scenario.users.size();
  std::vector<std::uint8_t> z(n, 0);
  std::vector<int> r(n, 0);
  std::vector<double> utilities(n, 0.0);
  std::vector<int> priorities(n);
  AdmissionResult result;
  result.users.resize(n);
  double used_compute = 0.0;
  double used_bandwidth = 0.0;
  int used_elements = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const UserRequest& u = scenario.users[i];
    priorities[i] = u.priority;
    UserDecision& d = result.users[i];
    d.user_id = u.id;
    if (!x[i]) continue;
    const MemberState& s = states[i];
    d.admitted = true;
    d.ris = plan.group_of[i] >= 0 && s.elements > 0;
    d.elements = d.ris ? s.elements : 0;
    d.compute = s.compute;
    d.rate = s.rate;
    d.delay = s.delay;
    d.utility = s.utility;
    z[i] = d.ris ? 1 : 0;
    r[i] = d.elements;
    utilities[i] = s.utility;
    used_compute += s.compute;
    used_bandwidth += u.bandwidth_demand;
    used_elements += d.elements;
  }
  result.ris_utility = ris_resource_utility(plan.groups, z, r, scenario.ris_elements);
  result.penalty = rejection_penalty(x, priorities);
  result.objective = objective(utilities, x, z, r, plan.groups, priorities, scenario.ris_elements,
                               config.weights);
  result.residual_compute = scenario.mec_capacity - used_compute;
  result.residual_bandwidth = scenario.bandwidth_capacity - used_bandwidth;
  result.residual_elements = scenario.ris_elements - used_elements;
  return result;
}

struct Candidacy {
  bool stale = true;
  bool feasible = false;
  bool blocked = false;  // over a cap once summed exactly; cleared on the next admission
  double gain = 0.0;
  double extra_compute = 0.0;
};

}  // namespace

AdmissionResult greedy_admission(const Scenario& scenario, const AdmissionPlan& plan,
                                 const AdmissionConfig& config) {
  const auto& users = scenario.users;
  const std::size_t n = users.size();
  const UtilityWeights& w = config.weights;
  const StateModel model(scenario, plan, config);

  std::vector<std::uint8_t> admitted(n, 0);
  std::vector<MemberState> states(n);
  std::vector<std::vector<int>> group_admitted(plan.groups.size());
  std::vector<Candidacy> cache(n);

  const double compute_cap = scenario.mec_capacity;
  const double bandwidth_cap = scenario.bandwidth_capacity;
  const int panel = scenario.ris_elements;
  double group_priority_sum = 0.0;
  for (const Group& g : plan.groups) group_priority_sum += g.priority;
  const double ris_scale =
      (panel > 0 && group_priority_sum > 0.0) ? 1.0 / (static_cast<double>(panel) * group_priority_sum) : 0.0;
  const double penalty_scale = plan.total_priority > 0.0 ? 1.0 / plan.total_priority : 0.0;

  auto joined = [&](int g, int user) {
    std::vector<int> members = group_admitted[static_cast<std::size_t>(g)];
    const int pos = model.position(user);
    auto at = std::find_if(members.begin(), members.end(),
                           [&](int m) { return model.position(m) > pos; });
    members.insert(at, user);
    return members;
  };

  auto evaluate = [&](std::size_t i) {
    Candidacy c;
    c.stale = false;
    const UserRequest& u = users[i];
    const double relief = w.gamma3 * u.priority * penalty_scale;
    const int g = plan.group_of[i];
    if (g < 0) {
      const MemberState s = model.member(static_cast<int>(i), 0);
      c.feasible = s.feasible;
      c.extra_compute = s.compute;
      c.gain = w.gamma1 * u.priority * s.utility + relief;
      return c;
    }
    const Group& group = plan.groups[static_cast<std::size_t>(g)];
    const std::vector<int> members = joined(g, static_cast<int>(i));
    const std::vector<MemberState> next = model.group_members(group, members);
    double served_delta = 0.0;
    double elements_delta = 0.0;
    c.feasible = true;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const int m = members[k];
      if (!next[k].feasible) c.feasible = false;
      c.extra_compute += next[k].compute;
      served_delta += users[static_cast<std::size_t>(m)].priority * next[k].utility;
      elements_delta += next[k].elements;
      if (m != static_cast<int>(i)) {
        const MemberState& old = states[static_cast<std::size_t>(m)];
        c.extra_compute -= old.compute;
        served_delta -= users[static_cast<std::size_t>(m)].priority * old.utility;
        elements_delta -= old.elements;
      }
    }
    c.gain = w.gamma1 * served_delta + w.gamma2 * group.priority * elements_delta * ris_scale + relief;
    return c;
  };

  auto better = [&](std::size_t a, std::size_t b) {
    if (cache[a].gain != cache[b].gain) return cache[a].gain > cache[b].gain;
    const UserRequest& ua = users[a];
    const UserRequest& ub = users[b];
    if (ua.priority != ub.priority) return ua.priority > ub.priority;
    if (ua.arrival_time != ub.arrival_time) return ua.arrival_time < ub.arrival_time;
    return ua.id < ub.id;
  };

  double used_compute = 0.0;
  double used_bandwidth = 0.0;
  for (;;) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (admitted[i]) continue;
      if (cache[i].stale) cache[i] = evaluate(i);
      const Candidacy& c = cache[i];
      if (!c.feasible || c.blocked) continue;
      if (used_compute + c.extra_compute > compute_cap) continue;
      if (used_bandwidth + users[i].bandwidth_demand > bandwidth_cap) continue;
      if (best == n || better(i, best)) best = i;
    }
    if (best == n || !(cache[best].gain > 0.0)) break;

    admitted[best] = 1;
    const int g = plan.group_of[best];
    std::vector<std::pair<std::size_t, MemberState>> undo;
    if (g < 0) {
      states[best] = model.member(static_cast<int>(best), 0);
    } else {
      const Group& group = plan.groups[static_cast<std::size_t>(g)];
      const std::vector<int> members = joined(g, static_cast<int>(best));
      const std::vector<MemberState> next = model.group_members(group, members);
      for (std::size_t k = 0; k < members.size(); ++k) {
        const auto m = static_cast<std::size_t>(members[k]);
        undo.emplace_back(m, states[m]);
        states[m] = next[k];
      }
    }

    // Exact re-summation in index order, the same sum the caps are judged by.
    double compute = 0.0;
    double bandwidth = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!admitted[i]) continue;
      compute += states[i].compute;
      bandwidth += users[i].bandwidth_demand;
    }
    if (compute > compute_cap || bandwidth > bandwidth_cap) {
      // The incremental check passed on rounding alone; back out.
      admitted[best] = 0;
      for (const auto& [m, old] : undo) states[m] = old;
      states[best] = {};
      cache[best].blocked = true;
      continue;
    }
    used_compute = compute;
    used_bandwidth = bandwidth;
    for (Candidacy& c : cache) c.blocked = false;
    if (g >= 0) {
      group_admitted[static_cast<std::size_t>(g)] = joined(g, static_cast<int>(best));
      for (int m : plan.groups[static_cast<std::size_t>(g)].members) cache[static_cast<std::size_t>(m)].stale = true;
    }
  }
  return assemble(scenario, plan, config, admitted, states);
}

AdmissionResult run_admission_control(const Scenario& scenario, const AdmissionConfig& config,
                                      const ChannelConfig& channel) {
  const AdmissionPlan plan = plan_admission(scenario, config, channel);
  return greedy_admission(scenario, plan, config);
}

DecisionEvaluation evaluate_decisions(const Scenario& scenario, const AdmissionPlan& plan,
                                      const AdmissionConfig& config, std::span<const std::uint8_t> x) {
  const std::size_t n = scenario.users.size();
  if (x.size() != n) throw MismatchedInputs("decision vector length differs from user count");
  const StateModel model(scenario, plan, config);
  std::vector<MemberState> states(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] && plan.group_of[i] < 0) states[i] = model.member(static_cast<int>(i), 0);
  }
  for (const Group& g : plan.groups) {
    std::vector<int> members;
    for (int m : g.members) {
      if (x[static_cast<std::size_t>(m)]) members.push_back(m);
    }
    const std::vector<MemberState> next = model.group_members(g, members);
    for (std::size_t k = 0; k < members.size(); ++k) states[static_cast<std::size_t>(members[k])] = next[k];
  }

  DecisionEvaluation eval;
  eval.result = assemble(scenario, plan, config, x, states);
  eval.feasible = eval.result.residual_compute >= 0.0 && eval.result.residual_bandwidth >= 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] && !states[i].feasible) eval.feasible = false;
  }
  return eval;
}

}  // namespace risadmit
