#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "risadmit/errors.hpp"
#include "risadmit/workload.hpp"

using namespace risadmit;

TEST_CASE("service mix follows 2:6:1") {
  CHECK(service_mix_counts(9) == std::array<int, 3>{2, 6, 1});
  CHECK(service_mix_counts(90) == std::array<int, 3>{20, 60, 10});
  CHECK(service_mix_counts(1) == std::array<int, 3>{0, 1, 0});
  CHECK_THROWS_AS(service_mix_counts(0), InvalidConfig);
}

TEST_CASE("service mix of 10 matches a direct quota computation") {
  // Quotas 20/9, 60/9, 10/9: floors (2, 6, 1), one unit left for the largest
  // fractional part, 6/9 from feMBB.
  const int n = 10;
  std::array<int, 3> expect{};
  std::array<int, 3> rem{};
  const std::array<int, 3> w{2, 6, 1};
  int left = n;
  for (int k = 0; k < 3; ++k) {
    expect[k] = n * w[k] / 9;
    rem[k] = n * w[k] % 9;
    left -= expect[k];
  }
  while (left-- > 0) {
    int best = 0;
    for (int k = 1; k < 3; ++k) {
      if (rem[k] > rem[best]) best = k;
    }
    ++expect[best];
    rem[best] = -1;
  }
  CHECK(expect == std::array<int, 3>{2, 7, 1});
  CHECK(service_mix_counts(n) == expect);
}

TEST_CASE("mix and sector counts conserve the population") {
  for (int n = 1; n <= 10000; ++n) {
    const auto mix = service_mix_counts(n);
    REQUIRE(mix[0] + mix[1] + mix[2] == n);
    for (int s : {2, 3}) {
      const auto sec = sector_counts(n, s, 3.0);
      REQUIRE(std::accumulate(sec.begin(), sec.end(), 0) == n);
    }
  }
}

TEST_CASE("sector counts honor the congestion ratio") {
  CHECK(sector_counts(400, 2, 3.0) == std::vector<int>{300, 100});
  CHECK(sector_counts(500, 3, 3.0) == std::vector<int>{300, 100, 100});
  CHECK(sector_counts(4, 2, 1.0) == std::vector<int>{2, 2});
  CHECK(sector_counts(5, 2, 1.0) == std::vector<int>{3, 2});
  CHECK_THROWS_AS(sector_counts(10, 4, 3.0), InvalidConfig);
  CHECK_THROWS_AS(sector_counts(10, 2, 0.0), InvalidConfig);
}

TEST_CASE("generate_scenario is deterministic and seed-sensitive") {
  ScenarioConfig cfg;
  cfg.user_count = 200;
  const Scenario a = generate_scenario(cfg, 42);
  const Scenario b = generate_scenario(cfg, 42);
  const Scenario c = generate_scenario(cfg, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK_NOTHROW(a.validate());
}

TEST_CASE("generated users respect class ranges and sector wedges") {
  ScenarioConfig cfg;
  cfg.user_count = 500;
  for (int sectors : {2, 3}) {
    cfg.sector_count = sectors;
    const Scenario s = generate_scenario(cfg, 7);
    REQUIRE(s.users.size() == 500);
    std::array<int, 3> per_class{};
    std::vector<int> per_sector(static_cast<std::size_t>(sectors), 0);
    const double wedge = 360.0 / sectors;
    for (const UserRequest& u : s.users) {
      const ServiceClass& c = cfg.classes[static_cast<std::size_t>(u.service)];
      ++per_class[static_cast<std::size_t>(u.service)];
      ++per_sector[static_cast<std::size_t>(u.sector)];
      CHECK(u.priority == c.priority);
      CHECK(u.deadline >= c.deadline_s.min);
      CHECK(u.deadline <= c.deadline_s.max);
      CHECK(u.compute_demand >= c.compute_cycles.min);
      CHECK(u.compute_demand <= c.compute_cycles.max);
      CHECK(u.data_size >= c.data_bits.min);
      CHECK(u.data_size <= c.data_bits.max);
      CHECK(u.bandwidth_demand >= c.bandwidth_hz.min);
      CHECK(u.bandwidth_demand <= c.bandwidth_hz.max);
      CHECK(u.arrival_time >= 0.0);
      CHECK(u.arrival_time <= cfg.arrival_horizon);
      CHECK(u.position.z == cfg.user_height);

      const double dx = u.position.x - cfg.bs_position.x;
      const double dy = u.position.y - cfg.bs_position.y;
      const double r = std::hypot(dx, dy);
      CHECK(r >= cfg.inner_radius - 1e-9);
      CHECK(r <= cfg.outer_radius + 1e-9);
      double az = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
      if (az < 0) az += 360.0;
      CHECK(az >= u.sector * wedge - 1e-9);
      CHECK(az <= (u.sector + 1) * wedge + 1e-9);
    }
    CHECK(per_class == service_mix_counts(500));
    CHECK(per_sector == sector_counts(500, sectors, cfg.congestion_ratio));
  }
}

TEST_CASE("three sectors with 500 users put 300 in sector 0") {
  ScenarioConfig cfg;
  cfg.user_count = 500;
  cfg.sector_count = 3;
  const Scenario s = generate_scenario(cfg, 1);
  CHECK(std::count_if(s.users.begin(), s.users.end(), [](const UserRequest& u) { return u.sector == 0; }) ==
        300);
}

TEST_CASE("nine users give class counts 2, 6, 1") {
  ScenarioConfig cfg;
  cfg.user_count = 9;
  const Scenario s = generate_scenario(cfg, 5);
  std::array<int, 3> n{};
  for (const auto& u : s.users) ++n[static_cast<std::size_t>(u.service)];
  CHECK(n == std::array<int, 3>{2, 6, 1});
}

TEST_CASE("RIS sits on sector 0's bisector") {
  ScenarioConfig cfg;
  cfg.sector_count = 2;
  const Point3 p2 = ris_position_for(cfg);
  CHECK(p2.x == doctest::Approx(0.0).scale(1.0));
  CHECK(p2.y == doctest::Approx(cfg.ris_distance));
  CHECK(p2.z == cfg.ris_height);
  cfg.sector_count = 3;
  const Point3 p3 = ris_position_for(cfg);
  CHECK(std::atan2(p3.y, p3.x) * 180.0 / std::numbers::pi == doctest::Approx(60.0));
}

TEST_CASE("config validation names the offending field") {
  auto message = [](ScenarioConfig cfg) {
    try {
      cfg.validate();
    } catch (const InvalidConfig& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  ScenarioConfig cfg;
  cfg.sector_count = 4;
  CHECK(message(cfg).find("sector_count") != std::string::npos);
  cfg = {};
  cfg.mec_capacity = 0;
  CHECK(message(cfg).find("mec_capacity") != std::string::npos);
  cfg = {};
  cfg.classes[1].data_bits = {5, 1};
  CHECK(message(cfg).find("classes.feMBB.data_bits") != std::string::npos);
  cfg = {};
  cfg.classes[2].priority = 5;
  CHECK(message(cfg).find("priorities") != std::string::npos);
  cfg = {};
  cfg.user_count = 0;
  CHECK(message(cfg).find("user_count") != std::string::npos);
  CHECK(message(ScenarioConfig{}).empty());
}

TEST_CASE("service names round-trip") {
  for (ServiceKind k : kAllServiceKinds) CHECK(parse_service(service_name(k)) == k);
  CHECK_THROWS_AS(parse_service("eMBB"), InvalidConfig);
}
