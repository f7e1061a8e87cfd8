#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "risadmit/errors.hpp"
#include "risadmit/experiment.hpp"
#include "risadmit/serialization.hpp"

using namespace risadmit;

namespace {

Scenario population(int n, int sectors) {
  Scenario s;
  s.bs_position = {0, 0, 25};
  s.ris_position = {0, 160, 30};
  s.ris_elements = 256;
  s.mec_capacity = 1e12;
  s.bandwidth_capacity = 1e9;
  s.sector_count = sectors;
  for (int i = 0; i < n; ++i) {
    UserRequest u;
    u.id = i;
    u.position = {50.0 + i, 10.0, 1.5};
    u.service = kAllServiceKinds[static_cast<std::size_t>(i % 3)];
    u.priority = 3 - i % 3;
    u.sector = i % sectors;
    u.bandwidth_demand = 1e6;
    u.data_size = 1e3;
    u.compute_demand = 1e6;
    u.deadline = 0.1;
    s.users.push_back(u);
  }
  return s;
}

AdmissionResult admit_first(const Scenario& s, int k) {
  AdmissionResult r;
  for (std::size_t i = 0; i < s.users.size(); ++i) {
    UserDecision d;
    d.user_id = s.users[i].id;
    d.admitted = static_cast<int>(i) < k;
    d.delay = d.admitted ? 0.01 * static_cast<double>(i + 1) : 0.0;
    r.users.push_back(d);
  }
  return r;
}

SweepConfig tiny_sweep() {
  SweepConfig c;
  c.user_counts = {20, 40};
  c.configurations = {{2, false}, {3, true}};
  c.replications = 3;
  c.base_seed = 5;
  return c;
}

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / "risadmit_test_experiment";
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("admission rate counts admitted users") {
  const Scenario s = population(10, 2);
  const Metrics m = compute_metrics(s, admit_first(s, 7));
  REQUIRE(m.overall_admission_rate);
  CHECK(*m.overall_admission_rate == doctest::Approx(0.7));
  REQUIRE(m.mean_latency);
  CHECK(*m.mean_latency == doctest::Approx(0.04));  // (0.01 + ... + 0.07) / 7
  CHECK(m.bandwidth_utilization == doctest::Approx(7e6 / 1e9));
}

TEST_CASE("everyone admitted gives rate 1 in every slice") {
  const Scenario s = population(9, 3);
  const Metrics m = compute_metrics(s, admit_first(s, 9));
  CHECK(*m.overall_admission_rate == 1.0);
  for (const auto& r : m.class_admission_rate) CHECK(*r == 1.0);
  for (const auto& r : m.sector_admission_rate) CHECK(*r == 1.0);
}

TEST_CASE("empty slices are null") {
  const Scenario s = population(1, 2);  // one eURLLC user in sector 0
  const Metrics m = compute_metrics(s, admit_first(s, 0));
  CHECK(*m.overall_admission_rate == 0.0);
  CHECK(m.class_admission_rate[0]);
  CHECK_FALSE(m.class_admission_rate[1]);
  CHECK_FALSE(m.class_admission_rate[2]);
  CHECK_FALSE(m.sector_admission_rate[1]);
  CHECK_FALSE(m.mean_latency);

  const Scenario none = population(0, 2);
  const Metrics e = compute_metrics(none, admit_first(none, 0));
  CHECK_FALSE(e.overall_admission_rate);
}

TEST_CASE("metrics reject a result from another scenario") {
  const Scenario s = population(5, 2);
  CHECK_THROWS_AS(compute_metrics(s, admit_first(population(4, 2), 1)), MismatchedInputs);
  AdmissionResult r = admit_first(s, 2);
  r.users[3].user_id = 99;
  CHECK_THROWS_AS(compute_metrics(s, r), MismatchedInputs);
}

TEST_CASE("class rates recombine into the overall rate") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ScenarioConfig cfg;
    cfg.user_count = 137 + static_cast<int>(seed);
    cfg.sector_count = 2 + static_cast<int>(seed % 2);
    cfg.mec_capacity = 2e13;
    const Scenario s = generate_scenario(cfg, seed);
    const Metrics m = compute_metrics(s, run_admission_control(s, {}, {}));
    const auto mix = service_mix_counts(cfg.user_count);
    int admitted_by_class = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      admitted_by_class += static_cast<int>(std::lround(*m.class_admission_rate[c] * mix[c]));
    }
    CHECK(static_cast<double>(admitted_by_class) / cfg.user_count == doctest::Approx(*m.overall_admission_rate));
    const auto secs = sector_counts(cfg.user_count, cfg.sector_count, cfg.congestion_ratio);
    int admitted_by_sector = 0;
    for (std::size_t k = 0; k < secs.size(); ++k) {
      admitted_by_sector += static_cast<int>(std::lround(*m.sector_admission_rate[k] * secs[k]));
    }
    CHECK(admitted_by_sector == admitted_by_class);
  }
}

TEST_CASE("sweep is deterministic across runs and worker counts") {
  SweepConfig c = tiny_sweep();
  const ExperimentReport a = run_sweep(c);
  c.workers = 3;
  const ExperimentReport b = run_sweep(c);
  CHECK(a == b);
  CHECK(report_to_csv(a) == report_to_csv(b));
  CHECK(a.cells.size() == 4);
}

TEST_CASE("adding cells leaves existing cells untouched") {
  const ExperimentReport small = run_sweep(tiny_sweep());
  SweepConfig big = tiny_sweep();
  big.user_counts = {10, 20, 30, 40};
  big.configurations = {{3, false}, {2, false}, {2, true}, {3, true}};
  const ExperimentReport large = run_sweep(big);
  for (const CellReport& cell : small.cells) {
    const CellReport* twin = large.find(cell.user_count, cell.sector_count, cell.ris_enabled);
    REQUIRE(twin);
    CHECK(*twin == cell);
  }
}

TEST_CASE("RIS on and off cells share user populations") {
  CHECK(replication_seed(1, 100, 2, 0) == replication_seed(1, 100, 2, 0));
  CHECK(replication_seed(1, 100, 2, 0) != replication_seed(1, 100, 3, 0));
  CHECK(replication_seed(1, 100, 2, 0) != replication_seed(1, 100, 2, 1));
  CHECK(replication_seed(1, 100, 2, 0) != replication_seed(2, 100, 2, 0));
}

TEST_CASE("one replication of one cell gives one row") {
  SweepConfig c;
  c.user_counts = {30};
  c.configurations = {{2, true}};
  c.replications = 1;
  const ExperimentReport r = run_sweep(c);
  REQUIRE(r.cells.size() == 1);
  CHECK(r.cells[0].replications == 1);
  for (const auto& m : r.cells[0].metrics) {
    if (m.mean) CHECK(*m.stddev == 0.0);
  }
  // Each metric contributes a mean row and a std row.
  const std::string csv = report_to_csv(r);
  const auto lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 1 + 2 * static_cast<long>(r.cells[0].metrics.size()));
  CHECK(csv.find("30,2,on,mean,overall_admission_rate,") != std::string::npos);
}

TEST_CASE("empty report exports a header-only CSV") {
  CHECK(report_to_csv({}) == "user_count,sectors,ris,replication_stat,metric,value\n");
}

TEST_CASE("null metrics export as empty CSV fields") {
  ExperimentReport r;
  CellReport cell;
  cell.user_count = 1;
  cell.sector_count = 2;
  cell.replications = 1;
  cell.metrics.push_back({"mean_latency", std::nullopt, std::nullopt, 0});
  r.cells.push_back(cell);
  CHECK(report_to_csv(r).find("1,2,off,mean,mean_latency,\n") != std::string::npos);
}

TEST_CASE("JSON export round-trips") {
  const ExperimentReport r = run_sweep(tiny_sweep());
  const auto path = temp_dir() / "report.json";
  export_report(r, path, ReportFormat::kJson);
  CHECK(import_report_json(path) == r);

  ExperimentReport with_null = r;
  with_null.cells[0].metrics[0].mean.reset();
  with_null.cells[0].metrics[0].stddev.reset();
  export_report(with_null, path, ReportFormat::kJson);
  CHECK(import_report_json(path) == with_null);
}

TEST_CASE("export to an unwritable path names the path") {
  const auto bad = temp_dir() / "missing" / "dir" / "r.csv";
  try {
    export_report({}, bad, ReportFormat::kCsv);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  CHECK_THROWS_AS(import_report_json(temp_dir() / "nope.json"), IoError);
}

TEST_CASE("sweep config validation") {
  SweepConfig c;
  c.user_counts = {50, 50};
  CHECK_THROWS_AS(c.validate(), InvalidConfig);
  c = {};
  c.user_counts = {};
  CHECK_THROWS_AS(c.validate(), InvalidConfig);
  c = {};
  c.replications = 0;
  CHECK_THROWS_AS(c.validate(), InvalidConfig);
  c = {};
  c.configurations = {{4, true}};
  CHECK_THROWS_AS(c.validate(), InvalidConfig);
  CHECK_NOTHROW(SweepConfig{}.validate());
}

TEST_CASE("sweep errors carry the cell coordinates") {
  SweepConfig c = tiny_sweep();
  c.base.scenario.classes[0].deadline_s = {0.0, 0.0};
  try {
    run_sweep(c);
    FAIL("expected InvalidConfig");
  } catch (const InvalidConfig& e) {
    CHECK(std::string(e.what()).find("deadline") != std::string::npos);
  }
}

TEST_CASE("config documents") {
  const json j = json::parse(R"({
    "user_count": 120, "sector_count": 2,
    "classes": {"umMTC": {"priority": 1, "deadline_s": {"min": 0.2, "max": 0.4}}},
    "channel": {"tx_power": 0.01},
    "admission": {"ris_enabled": false, "weights": {"gamma3": 0.25}},
    "sweep": {"user_counts": [10, 20], "replications": 2, "configurations": [{"sectors": 3, "ris": true}]}
  })");
  const SweepConfig c = sweep_config_from_json(j);
  CHECK(c.base.scenario.user_count == 120);
  CHECK(c.base.scenario.sector_count == 2);
  CHECK(c.base.scenario.classes[2].deadline_s == Range{0.2, 0.4});
  CHECK(c.base.scenario.classes[2].compute_cycles == default_service_classes()[2].compute_cycles);
  CHECK(c.base.channel.tx_power == 0.01);
  CHECK_FALSE(c.base.admission.ris_enabled);
  CHECK(c.base.admission.weights.gamma3 == 0.25);
  CHECK(c.user_counts == std::vector<int>{10, 20});
  CHECK(c.replications == 2);
  CHECK(c.configurations == std::vector<CellConfiguration>{{3, true}});

  CHECK(run_config_from_json(json::object()) == RunConfig{});
  CHECK(sweep_config_from_json(to_json(c)) == c);
  CHECK(run_config_from_json(to_json(c.base)) == c.base);
}

TEST_CASE("config documents reject unknown and mistyped fields") {
  auto message = [](const char* text) {
    try {
      sweep_config_from_json(json::parse(text));
    } catch (const InvalidConfig& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"user_cout": 5})").find("user_cout") != std::string::npos);
  CHECK(message(R"({"channel": {"txpower": 1}})").find("txpower") != std::string::npos);
  CHECK(message(R"({"user_count": "many"})").find("user_count") != std::string::npos);
  CHECK(message(R"({"classes": {"eMBB": {}}})").find("eMBB") != std::string::npos);
  CHECK(message(R"({"sector_count": 5})").find("sector_count") != std::string::npos);
  CHECK(message(R"({"admission": {"weights": {"alpha1": 0.9}}})").find("alpha") != std::string::npos);
}

TEST_CASE("reading config files") {
  const auto dir = temp_dir();
  CHECK_THROWS_AS(read_json_file(dir / "absent.json"), IoError);
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(read_json_file(bad), InvalidConfig);
}
