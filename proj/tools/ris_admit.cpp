// ris-admit: command-line front end for single runs, sweeps and the
// exhaustive oracle.
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "risadmit/errors.hpp"
#include "risadmit/experiment.hpp"
#include "risadmit/oracle.hpp"
#include "risadmit/serialization.hpp"

namespace {

using namespace risadmit;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kIoError = 2;

struct Overrides {
  std::optional<std::string> ris;
  std::optional<int> sectors;
  std::optional<int> users;

  void apply(RunConfig& rc) const {
    if (ris) rc.admission.ris_enabled = (*ris == "on");
    if (sectors) rc.scenario.sector_count = *sectors;
    if (users) rc.scenario.user_count = *users;
  }
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--ris", o.ris, "Enable or disable RIS assistance")->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--sectors", o.sectors, "Sector count")->check(CLI::IsMember({2, 3}));
  cmd->add_option("--users", o.users, "Number of users")->check(CLI::PositiveNumber);
}

RunConfig load_run(const std::string& path, const Overrides& o) {
  RunConfig rc = run_config_from_json(read_json_file(path));
  o.apply(rc);
  rc.validate();
  return rc;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("ris-admit");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("RIS_ADMIT_LOG")) spdlog::cfg::helpers::load_levels(level);
}

int run_command(const std::string& config, std::uint64_t seed, const std::string& out,
                const std::string& format, const Overrides& o) {
  const RunConfig rc = load_run(config, o);
  const Scenario scenario = generate_scenario(rc.scenario, seed);
  const AdmissionResult result = run_admission_control(scenario, rc.admission, rc.channel);
  const Metrics metrics = compute_metrics(scenario, result);
  spdlog::info("admitted {:.4f} of {} users, objective {:.6f}", metrics.overall_admission_rate.value_or(0.0),
               scenario.users.size(), result.objective);

  if (format == "json") {
    json j = {{"seed", seed}, {"metrics", metrics}, {"result", result}};
    write_text_file(out, dump(j));
    return kOk;
  }
  std::ostringstream os;
  os << std::setprecision(17);
  os << "user_id,service,sector,priority,admitted,ris,elements,compute,rate,delay,utility\n";
  for (std::size_t i = 0; i < scenario.users.size(); ++i) {
    const UserRequest& u = scenario.users[i];
    const UserDecision& d = result.users[i];
    os << d.user_id << ',' << service_name(u.service) << ',' << u.sector << ',' << u.priority << ','
       << int(d.admitted) << ',' << int(d.ris) << ',' << d.elements << ',' << d.compute << ',' << d.rate << ','
       << d.delay << ',' << d.utility << '\n';
  }
  write_text_file(out, os.str());
  return kOk;
}

int sweep_command(const std::string& config, const std::string& out_dir, const Overrides& o,
                  std::optional<int> replications, std::optional<int> workers) {
  SweepConfig sc = sweep_config_from_json(read_json_file(config));
  o.apply(sc.base);
  if (o.sectors) {
    for (auto& c : sc.configurations) c.sector_count = *o.sectors;
  }
  if (o.ris) {
    for (auto& c : sc.configurations) c.ris_enabled = (*o.ris == "on");
  }
  if (o.users) sc.user_counts = {*o.users};
  if (replications) sc.replications = *replications;
  if (workers) sc.workers = *workers;
  sc.validate();

  const ExperimentReport report = run_sweep(sc);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  const std::filesystem::path dir(out_dir);
  export_report(report, dir / "report.csv", ReportFormat::kCsv);
  export_report(report, dir / "report.json", ReportFormat::kJson);
  spdlog::info("wrote {} cells to {}", report.cells.size(), out_dir);
  return kOk;
}

int oracle_command(const std::string& config, std::uint64_t seed, int max_users, const std::string& out,
                   const Overrides& o, int workers) {
  const RunConfig rc = load_run(config, o);
  const Scenario scenario = generate_scenario(rc.scenario, seed);
  OracleOptions opts;
  opts.max_users = max_users;
  opts.workers = workers;
  const OracleResult oracle = exhaustive_optimal(scenario, rc.admission, rc.channel, opts);
  const AdmissionResult greedy = run_admission_control(scenario, rc.admission, rc.channel);
  json j = {{"seed", seed}, {"oracle", oracle}, {"greedy_objective", greedy.objective}};
  if (out.empty()) {
    std::cout << dump(j);
  } else {
    write_text_file(out, dump(j));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"RIS-assisted admission control simulator"};
  app.require_subcommand(1);

  std::string config;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  Overrides run_o, sweep_o, oracle_o;
  std::optional<int> replications, sweep_workers;
  int max_users = 12;
  int oracle_workers = 1;

  auto* run = app.add_subcommand("run", "Generate one scenario and run admission control");
  run->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Scenario seed");
  run->add_option("--out", out, "Output file")->required();
  run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  add_overrides(run, run_o);

  auto* sweep = app.add_subcommand("sweep", "Run the configured parameter sweep");
  sweep->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "Output directory")->required();
  sweep->add_option("--replications", replications, "Override sweep.replications")->check(CLI::PositiveNumber);
  sweep->add_option("--workers", sweep_workers, "Worker threads")->check(CLI::PositiveNumber);
  add_overrides(sweep, sweep_o);

  auto* oracle = app.add_subcommand("oracle", "Solve a small instance exactly and compare with greedy");
  oracle->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
  oracle->add_option("--seed", seed, "Scenario seed");
  oracle->add_option("--max-users", max_users, "Refuse instances larger than this")->check(CLI::Range(0, 30));
  oracle->add_option("--out", out, "Output file (stdout if omitted)");
  oracle->add_option("--workers", oracle_workers, "Worker threads")->check(CLI::PositiveNumber);
  add_overrides(oracle, oracle_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return run_command(config, seed, out, format, run_o);
    if (*sweep) return sweep_command(config, out, sweep_o, replications, sweep_workers);
    return oracle_command(config, seed, max_users, out, oracle_o, oracle_workers);
  } catch (const IoError& e) {
    spdlog::error("{}", e.what());
    return kIoError;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kConfigError;
  }
}
