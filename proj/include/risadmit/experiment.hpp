#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "risadmit/admission.hpp"

namespace risadmit {

// Everything needed for one admission run apart from the seed.
struct RunConfig {
  ScenarioConfig scenario;
  ChannelConfig channel;
  AdmissionConfig admission;

  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct CellConfiguration {
  int sector_count = 2;
  bool ris_enabled = true;
  friend bool operator==(const CellConfiguration&, const CellConfiguration&) = default;
};

struct SweepConfig {
  std::vector<int> user_counts = {50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
  std::vector<CellConfiguration> configurations = {{2, false}, {2, true}, {3, false}, {3, true}};
  int replications = 20;
  std::uint64_t base_seed = 1;
  int workers = 1;
  RunConfig base;

  void validate() const;
  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

// Empty slices (no users of a class, say) are nullopt rather than zero.
struct Metrics {
  std::optional<double> overall_admission_rate;
  std::array<std::optional<double>, 3> class_admission_rate;
  std::vector<std::optional<double>> sector_admission_rate;
  double bandwidth_utilization = 0.0;   // sum of admitted B_i / B_max
  std::optional<double> mean_latency;   // over admitted users only
  double objective_value = 0.0;
};

// Throws MismatchedInputs if the result does not list the scenario's users
// in order.
Metrics compute_metrics(const Scenario& scenario, const AdmissionResult& result);

// Flattened (name, value) view in a stable order.
std::vector<std::pair<std::string, std::optional<double>>> metric_values(const Metrics& m);

struct MetricSummary {
  std::string name;
  std::optional<double> mean;
  std::optional<double> stddev;  // sample standard deviation; 0 for a single sample
  int samples = 0;               // replications where the metric was defined
  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

struct CellReport {
  int user_count = 0;
  int sector_count = 0;
  bool ris_enabled = false;
  int replications = 0;
  std::vector<MetricSummary> metrics;

  const MetricSummary* find(const std::string& name) const;
  std::optional<double> mean(const std::string& name) const;
  friend bool operator==(const CellReport&, const CellReport&) = default;
};

struct ExperimentReport {
  std::vector<CellReport> cells;  // user_counts x configurations, in config order

  const CellReport* find(int user_count, int sector_count, bool ris_enabled) const;
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

// Seed of one replication. Depends only on the cell's own coordinates, so
// adding cells to a sweep never changes existing ones. The RIS flag is not
// mixed in: RIS on/off cells see the same user populations.
std::uint64_t replication_seed(std::uint64_t base_seed, int user_count, int sector_count, int replication);

RunConfig cell_run_config(const RunConfig& base, int user_count, const CellConfiguration& cell);

ExperimentReport run_sweep(const SweepConfig& config);

enum class ReportFormat { kCsv, kJson };

// Throws IoError naming the path on failure.
void export_report(const ExperimentReport& report, const std::filesystem::path& path, ReportFormat format);
ExperimentReport import_report_json(const std::filesystem::path& path);

std::string report_to_csv(const ExperimentReport& report);

}  // namespace risadmit
