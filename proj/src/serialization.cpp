#include "risadmit/serialization.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "risadmit/errors.hpp"

namespace risadmit {

namespace {

// Strict reader for one config object: every key must be consumed.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InvalidConfig(label("") + "expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw InvalidConfig(label(key) + "has the wrong type");
    }
  }

  template <typename F>
  void with(const char* key, F&& f) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it != j_.end()) f(*it, label(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw InvalidConfig(label(it.key()) + "unknown field");
    }
  }

 private:
  std::string label(const std::string& key) const {
    std::string s = path_;
    if (!key.empty()) s += s.empty() ? key : "." + key;
    return s.empty() ? "" : s + ": ";
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string trim_label(std::string label) {
  // "a.b: " -> "a.b"
  if (label.size() >= 2) label.resize(label.size() - 2);
  return label;
}

void read_range(const json& j, const std::string& label, Range& r) {
  Fields f(j, trim_label(label));
  f.get("min", r.min);
  f.get("max", r.max);
  f.finish();
}

void read_point(const json& j, const std::string& label, Point3& p) {
  Fields f(j, trim_label(label));
  f.get("x", p.x);
  f.get("y", p.y);
  f.get("z", p.z);
  f.finish();
}

json range_json(const Range& r) { return {{"min", r.min}, {"max", r.max}}; }

void read_classes(const json& j, const std::string& label, std::array<ServiceClass, 3>& classes) {
  Fields f(j, trim_label(label));
  for (auto& c : classes) {
    const std::string name(service_name(c.kind));
    f.with(name.c_str(), [&](const json& cj, const std::string& cl) {
      Fields cf(cj, trim_label(cl));
      cf.get("priority", c.priority);
      cf.with("deadline_s", [&](const json& v, const std::string& l) { read_range(v, l, c.deadline_s); });
      cf.with("compute_cycles",
              [&](const json& v, const std::string& l) { read_range(v, l, c.compute_cycles); });
      cf.with("data_bits", [&](const json& v, const std::string& l) { read_range(v, l, c.data_bits); });
      cf.with("bandwidth_hz", [&](const json& v, const std::string& l) { read_range(v, l, c.bandwidth_hz); });
      cf.finish();
    });
  }
  f.finish();
}

void read_channel(const json& j, const std::string& label, ChannelConfig& c) {
  Fields f(j, trim_label(label));
  f.get("carrier_frequency", c.carrier_frequency);
  f.get("noise_power_density", c.noise_power_density);
  f.get("tx_power", c.tx_power);
  f.get("pathloss_exponent_direct", c.pathloss_exponent_direct);
  f.get("pathloss_exponent_ris", c.pathloss_exponent_ris);
  f.get("direct_blockage_penalty_db", c.direct_blockage_penalty_db);
  f.get("ris_element_gain", c.ris_element_gain);
  f.get("los_radius", c.los_radius);
  f.finish();
}

void read_admission(const json& j, const std::string& label, AdmissionConfig& a) {
  Fields f(j, trim_label(label));
  f.get("ris_enabled", a.ris_enabled);
  f.get("theta_range_deg", a.theta_range_deg);
  f.get("theta_max_deg", a.theta_max_deg);
  f.get("max_group_size", a.max_group_size);
  f.get("min_slack", a.compute.min_slack);
  f.get("min_compute_grant", a.compute.min_grant);
  f.with("weights", [&](const json& wj, const std::string& wl) {
    Fields wf(wj, trim_label(wl));
    wf.get("alpha1", a.weights.alpha1);
    wf.get("alpha2", a.weights.alpha2);
    wf.get("gamma1", a.weights.gamma1);
    wf.get("gamma2", a.weights.gamma2);
    wf.get("gamma3", a.weights.gamma3);
    wf.finish();
  });
  f.finish();
}

// Reads the run-level part of a config; `allow` names extra top-level keys
// that the caller handles.
RunConfig read_run(const json& j, const std::set<std::string>& allow) {
  RunConfig rc;
  Fields f(j, "");
  ScenarioConfig& s = rc.scenario;
  f.get("user_count", s.user_count);
  f.get("sector_count", s.sector_count);
  f.get("congestion_ratio", s.congestion_ratio);
  f.get("arrival_horizon", s.arrival_horizon);
  f.get("inner_radius", s.inner_radius);
  f.get("outer_radius", s.outer_radius);
  f.get("user_height", s.user_height);
  f.with("bs_position", [&](const json& v, const std::string& l) { read_point(v, l, s.bs_position); });
  f.get("ris_distance", s.ris_distance);
  f.get("ris_height", s.ris_height);
  f.get("ris_elements", s.ris_elements);
  f.get("mec_capacity", s.mec_capacity);
  f.get("bandwidth_capacity", s.bandwidth_capacity);
  f.with("classes", [&](const json& v, const std::string& l) { read_classes(v, l, s.classes); });
  f.with("channel", [&](const json& v, const std::string& l) { read_channel(v, l, rc.channel); });
  f.with("admission", [&](const json& v, const std::string& l) { read_admission(v, l, rc.admission); });
  for (const auto& key : allow) f.with(key.c_str(), [](const json&, const std::string&) {});
  f.finish();
  return rc;
}

std::optional<double> optional_number(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void to_json(json& j, const Point3& p) { j = {{"x", p.x}, {"y", p.y}, {"z", p.z}}; }

void from_json(const json& j, Point3& p) {
  j.at("x").get_to(p.x);
  j.at("y").get_to(p.y);
  j.at("z").get_to(p.z);
}

void to_json(json& j, const ServiceClass& c) {
  j = {{"priority", c.priority},
       {"deadline_s", range_json(c.deadline_s)},
       {"compute_cycles", range_json(c.compute_cycles)},
       {"data_bits", range_json(c.data_bits)},
       {"bandwidth_hz", range_json(c.bandwidth_hz)}};
}

void to_json(json& j, const UserRequest& u) {
  j = {{"id", u.id},
       {"position", u.position},
       {"service", std::string(service_name(u.service))},
       {"priority", u.priority},
       {"arrival_time", u.arrival_time},
       {"compute_demand", u.compute_demand},
       {"bandwidth_demand", u.bandwidth_demand},
       {"data_size", u.data_size},
       {"deadline", u.deadline},
       {"sector", u.sector}};
}

void from_json(const json& j, UserRequest& u) {
  j.at("id").get_to(u.id);
  j.at("position").get_to(u.position);
  u.service = parse_service(j.at("service").get<std::string>());
  j.at("priority").get_to(u.priority);
  j.at("arrival_time").get_to(u.arrival_time);
  j.at("compute_demand").get_to(u.compute_demand);
  j.at("bandwidth_demand").get_to(u.bandwidth_demand);
  j.at("data_size").get_to(u.data_size);
  j.at("deadline").get_to(u.deadline);
  j.at("sector").get_to(u.sector);
}

void to_json(json& j, const Scenario& s) {
  j = {{"bs_position", s.bs_position},
       {"ris_position", s.ris_position},
       {"ris_elements", s.ris_elements},
       {"mec_capacity", s.mec_capacity},
       {"bandwidth_capacity", s.bandwidth_capacity},
       {"sector_count", s.sector_count},
       {"seed", s.seed},
       {"users", s.users}};
}

void from_json(const json& j, Scenario& s) {
  j.at("bs_position").get_to(s.bs_position);
  j.at("ris_position").get_to(s.ris_position);
  j.at("ris_elements").get_to(s.ris_elements);
  j.at("mec_capacity").get_to(s.mec_capacity);
  j.at("bandwidth_capacity").get_to(s.bandwidth_capacity);
  j.at("sector_count").get_to(s.sector_count);
  j.at("seed").get_to(s.seed);
  j.at("users").get_to(s.users);
}

void to_json(json& j, const ChannelConfig& c) {
  j = {{"carrier_frequency", c.carrier_frequency},
       {"noise_power_density", c.noise_power_density},
       {"tx_power", c.tx_power},
       {"pathloss_exponent_direct", c.pathloss_exponent_direct},
       {"pathloss_exponent_ris", c.pathloss_exponent_ris},
       {"direct_blockage_penalty_db", c.direct_blockage_penalty_db},
       {"ris_element_gain", c.ris_element_gain},
       {"los_radius", c.los_radius}};
}

void to_json(json& j, const AdmissionConfig& c) {
  j = {{"ris_enabled", c.ris_enabled},
       {"theta_range_deg", c.theta_range_deg},
       {"theta_max_deg", c.theta_max_deg},
       {"max_group_size", c.max_group_size},
       {"min_slack", c.compute.min_slack},
       {"min_compute_grant", c.compute.min_grant},
       {"weights",
        {{"alpha1", c.weights.alpha1},
         {"alpha2", c.weights.alpha2},
         {"gamma1", c.weights.gamma1},
         {"gamma2", c.weights.gamma2},
         {"gamma3", c.weights.gamma3}}}};
}

void to_json(json& j, const UserDecision& d) {
  j = {{"user_id", d.user_id},   {"admitted", d.admitted}, {"ris", d.ris},
       {"elements", d.elements}, {"compute", d.compute},   {"rate", d.rate},
       {"delay", d.delay},       {"utility", d.utility}};
}

void to_json(json& j, const AdmissionResult& r) {
  j = {{"objective_value", r.objective},
       {"ris_utility", r.ris_utility},
       {"penalty", r.penalty},
       {"residual_compute", r.residual_compute},
       {"residual_bandwidth", r.residual_bandwidth},
       {"residual_elements", r.residual_elements},
       {"users", r.users}};
}

void to_json(json& j, const Metrics& m) {
  j = json::object();
  for (const auto& [name, value] : metric_values(m)) j[name] = optional_json(value);
}

void to_json(json& j, const OracleResult& r) {
  j = {{"best_objective", r.best_objective},
       {"explored_count", r.explored_count},
       {"feasible_count", r.feasible_count},
       {"best_decisions", r.best_decisions}};
}

void to_json(json& j, const ExperimentReport& r) {
  j = json::object();
  json cells = json::array();
  for (const auto& c : r.cells) {
    json metrics = json::array();
    for (const auto& m : c.metrics) {
      metrics.push_back({{"name", m.name},
                         {"mean", optional_json(m.mean)},
                         {"std", optional_json(m.stddev)},
                         {"samples", m.samples}});
    }
    cells.push_back({{"user_count", c.user_count},
                     {"sectors", c.sector_count},
                     {"ris", c.ris_enabled},
                     {"replications", c.replications},
                     {"metrics", metrics}});
  }
  j["cells"] = cells;
}

void from_json(const json& j, ExperimentReport& r) {
  r.cells.clear();
  for (const auto& cj : j.at("cells")) {
    CellReport c;
    cj.at("user_count").get_to(c.user_count);
    cj.at("sectors").get_to(c.sector_count);
    cj.at("ris").get_to(c.ris_enabled);
    cj.at("replications").get_to(c.replications);
    for (const auto& mj : cj.at("metrics")) {
      MetricSummary m;
      mj.at("name").get_to(m.name);
      m.mean = optional_number(mj.at("mean"));
      m.stddev = optional_number(mj.at("std"));
      mj.at("samples").get_to(m.samples);
      c.metrics.push_back(std::move(m));
    }
    r.cells.push_back(std::move(c));
  }
}

RunConfig run_config_from_json(const json& j) {
  // One document drives every subcommand; the sweep section is checked too.
  return sweep_config_from_json(j).base;
}

SweepConfig sweep_config_from_json(const json& j) {
  SweepConfig sc;
  sc.base = read_run(j, {"sweep"});
  if (auto it = j.find("sweep"); it != j.end()) {
    Fields f(*it, "sweep");
    f.get("user_counts", sc.user_counts);
    f.get("replications", sc.replications);
    f.get("base_seed", sc.base_seed);
    f.get("workers", sc.workers);
    f.with("configurations", [&](const json& v, const std::string& l) {
      if (!v.is_array()) throw InvalidConfig(l + "expected an array");
      sc.configurations.clear();
      for (const auto& cj : v) {
        CellConfiguration cell;
        Fields cf(cj, trim_label(l));
        cf.get("sectors", cell.sector_count);
        cf.get("ris", cell.ris_enabled);
        cf.finish();
        sc.configurations.push_back(cell);
      }
    });
    f.finish();
  }
  sc.validate();
  return sc;
}

json to_json(const RunConfig& c) {
  const ScenarioConfig& s = c.scenario;
  json classes = json::object();
  for (const auto& cl : s.classes) classes[std::string(service_name(cl.kind))] = cl;
  return {{"user_count", s.user_count},
          {"sector_count", s.sector_count},
          {"congestion_ratio", s.congestion_ratio},
          {"arrival_horizon", s.arrival_horizon},
          {"inner_radius", s.inner_radius},
          {"outer_radius", s.outer_radius},
          {"user_height", s.user_height},
          {"bs_position", s.bs_position},
          {"ris_distance", s.ris_distance},
          {"ris_height", s.ris_height},
          {"ris_elements", s.ris_elements},
          {"mec_capacity", s.mec_capacity},
          {"bandwidth_capacity", s.bandwidth_capacity},
          {"classes", classes},
          {"channel", c.channel},
          {"admission", c.admission}};
}

json to_json(const SweepConfig& c) {
  json j = to_json(c.base);
  json confs = json::array();
  for (const auto& cell : c.configurations) {
    confs.push_back({{"sectors", cell.sector_count}, {"ris", cell.ris_enabled}});
  }
  j["sweep"] = {{"user_counts", c.user_counts},
                {"configurations", confs},
                {"replications", c.replications},
                {"base_seed", c.base_seed},
                {"workers", c.workers}};
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw InvalidConfig(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("cannot write " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace risadmit
