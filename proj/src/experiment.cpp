#include "risadmit/experiment.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "risadmit/errors.hpp"
#include "risadmit/serialization.hpp"

namespace risadmit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::optional<double> ratio(int num, int den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / den;
}

MetricSummary summarize(std::string name, const std::vector<std::optional<double>>& values) {
  MetricSummary s;
  s.name = std::move(name);
  double sum = 0.0;
  for (const auto& v : values) {
    if (!v) continue;
    sum += *v;
    ++s.samples;
  }
  if (s.samples == 0) return s;
  const double mean = sum / s.samples;
  double sq = 0.0;
  for (const auto& v : values) {
    if (v) sq += (*v - mean) * (*v - mean);
  }
  s.mean = mean;
  s.stddev = s.samples > 1 ? std::sqrt(sq / (s.samples - 1)) : 0.0;
  return s;
}

std::string format_value(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os << std::setprecision(17) << *v;
  return os.str();
}

}  // namespace

void RunConfig::validate() const {
  scenario.validate();
  channel.validate();
  admission.validate();
}

void SweepConfig::validate() const {
  if (user_counts.empty()) throw InvalidConfig("sweep.user_counts: must not be empty");
  for (std::size_t i = 0; i < user_counts.size(); ++i) {
    if (user_counts[i] < 1) throw InvalidConfig("sweep.user_counts: entries must be positive");
    if (i > 0 && user_counts[i] <= user_counts[i - 1]) {
      throw InvalidConfig("sweep.user_counts: must be strictly increasing");
    }
  }
  if (configurations.empty()) throw InvalidConfig("sweep.configurations: must not be empty");
  for (const auto& c : configurations) {
    if (c.sector_count != 2 && c.sector_count != 3) {
      throw InvalidConfig("sweep.configurations.sectors: must be 2 or 3");
    }
  }
  if (replications < 1) throw InvalidConfig("sweep.replications: must be >= 1");
  if (workers < 1) throw InvalidConfig("sweep.workers: must be >= 1");
  base.validate();
}

Metrics compute_metrics(const Scenario& scenario, const AdmissionResult& result) {
  const auto& users = scenario.users;
  if (result.users.size() != users.size()) {
    throw MismatchedInputs("result lists " + std::to_string(result.users.size()) + " users, scenario has " +
                           std::to_string(users.size()));
  }
  const auto sectors = static_cast<std::size_t>(scenario.sector_count);
  std::array<int, 3> class_total{}, class_admitted{};
  std::vector<int> sector_total(sectors, 0), sector_admitted(sectors, 0);
  int admitted = 0;
  double bandwidth = 0.0;
  double latency = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const UserRequest& u = users[i];
    const UserDecision& d = result.users[i];
    if (d.user_id != u.id) throw MismatchedInputs("result user ids differ from the scenario's");
    const auto c = static_cast<std::size_t>(u.service);
    const auto s = static_cast<std::size_t>(u.sector);
    ++class_total[c];
    ++sector_total[s];
    if (!d.admitted) continue;
    ++admitted;
    ++class_admitted[c];
    ++sector_admitted[s];
    bandwidth += u.bandwidth_demand;
    latency += d.delay;
  }

  Metrics m;
  m.overall_admission_rate = ratio(admitted, static_cast<int>(users.size()));
  for (std::size_t c = 0; c < 3; ++c) m.class_admission_rate[c] = ratio(class_admitted[c], class_total[c]);
  for (std::size_t s = 0; s < sectors; ++s) {
    m.sector_admission_rate.push_back(ratio(sector_admitted[s], sector_total[s]));
  }
  m.bandwidth_utilization = bandwidth / scenario.bandwidth_capacity;
  if (admitted > 0) m.mean_latency = latency / admitted;
  m.objective_value = result.objective;
  return m;
}

std::vector<std::pair<std::string, std::optional<double>>> metric_values(const Metrics& m) {
  std::vector<std::pair<std::string, std::optional<double>>> out;
  out.emplace_back("overall_admission_rate", m.overall_admission_rate);
  for (std::size_t c = 0; c < 3; ++c) {
    out.emplace_back("admission_rate_" + std::string(service_name(kAllServiceKinds[c])),
                     m.class_admission_rate[c]);
  }
  for (std::size_t s = 0; s < m.sector_admission_rate.size(); ++s) {
    out.emplace_back("admission_rate_sector_" + std::to_string(s), m.sector_admission_rate[s]);
  }
  out.emplace_back("bandwidth_utilization", m.bandwidth_utilization);
  out.emplace_back("mean_latency", m.mean_latency);
  out.emplace_back("objective_value", m.objective_value);
  return out;
}

const MetricSummary* CellReport::find(const std::string& name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

std::optional<double> CellReport::mean(const std::string& name) const {
  const MetricSummary* m = find(name);
  return m ? m->mean : std::nullopt;
}

const CellReport* ExperimentReport::find(int user_count, int sector_count, bool ris_enabled) const {
  for (const auto& c : cells) {
    if (c.user_count == user_count && c.sector_count == sector_count && c.ris_enabled == ris_enabled) {
      return &c;
    }
  }
  return nullptr;
}

std::uint64_t replication_seed(std::uint64_t base_seed, int user_count, int sector_count, int replication) {
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(user_count));
  h = splitmix64(h ^ static_cast<std::uint64_t>(sector_count));
  h = splitmix64(h ^ static_cast<std::uint64_t>(replication));
  return base_seed ^ h;
}

RunConfig cell_run_config(const RunConfig& base, int user_count, const CellConfiguration& cell) {
  RunConfig rc = base;
  rc.scenario.user_count = user_count;
  rc.scenario.sector_count = cell.sector_count;
  rc.admission.ris_enabled = cell.ris_enabled;
  return rc;
}

ExperimentReport run_sweep(const SweepConfig& config) {
  config.validate();
  struct Task {
    std::size_t cell;
    int user_count;
    CellConfiguration conf;
    int replication;
  };
  std::vector<Task> tasks;
  std::size_t cell_index = 0;
  for (int count : config.user_counts) {
    for (const auto& conf : config.configurations) {
      for (int r = 0; r < config.replications; ++r) tasks.push_back({cell_index, count, conf, r});
      ++cell_index;
    }
  }
  const std::size_t cell_count = cell_index;

  std::vector<Metrics> metrics(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      try {
        const RunConfig rc = cell_run_config(config.base, task.user_count, task.conf);
        const std::uint64_t seed =
            replication_seed(config.base_seed, task.user_count, task.conf.sector_count, task.replication);
        const Scenario scenario = generate_scenario(rc.scenario, seed);
        const AdmissionResult result = run_admission_control(scenario, rc.admission, rc.channel);
        metrics[t] = compute_metrics(scenario, result);
      } catch (const Error& e) {
        errors[t] = "cell (users=" + std::to_string(task.user_count) +
                    ", sectors=" + std::to_string(task.conf.sector_count) +
                    ", ris=" + (task.conf.ris_enabled ? "on" : "off") +
                    ", replication=" + std::to_string(task.replication) + "): " + e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int k = 1; k < config.workers; ++k) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw InvalidConfig(e);
  }

  ExperimentReport report;
  report.cells.resize(cell_count);
  for (std::size_t c = 0; c < cell_count; ++c) {
    std::vector<std::vector<std::optional<double>>> columns;
    std::vector<std::string> names;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].cell != c) continue;
      CellReport& cell = report.cells[c];
      cell.user_count = tasks[t].user_count;
      cell.sector_count = tasks[t].conf.sector_count;
      cell.ris_enabled = tasks[t].conf.ris_enabled;
      ++cell.replications;
      const auto values = metric_values(metrics[t]);
      if (names.empty()) {
        for (const auto& [name, v] : values) names.push_back(name);
        columns.resize(values.size());
      }
      for (std::size_t k = 0; k < values.size(); ++k) columns[k].push_back(values[k].second);
    }
    for (std::size_t k = 0; k < names.size(); ++k) {
      report.cells[c].metrics.push_back(summarize(names[k], columns[k]));
    }
    spdlog::debug("cell users={} sectors={} ris={} overall={}", report.cells[c].user_count,
                  report.cells[c].sector_count, report.cells[c].ris_enabled,
                  format_value(report.cells[c].mean("overall_admission_rate")));
  }
  return report;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "user_count,sectors,ris,replication_stat,metric,value\n";
  for (const auto& cell : report.cells) {
    for (const auto& m : cell.metrics) {
      for (auto [stat, value] : {std::pair{"mean", m.mean}, std::pair{"std", m.stddev}}) {
        os << cell.user_count << ',' << cell.sector_count << ',' << (cell.ris_enabled ? "on" : "off") << ','
           << stat << ',' << m.name << ',' << format_value(value) << '\n';
      }
    }
  }
  return os.str();
}

void export_report(const ExperimentReport& report, const std::filesystem::path& path, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    write_text_file(path, report_to_csv(report));
  } else {
    json j = report;
    write_text_file(path, dump(j));
  }
}

ExperimentReport import_report_json(const std::filesystem::path& path) {
  return read_json_file(path).get<ExperimentReport>();
}

}  // namespace risadmit
