#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "risadmit/errors.hpp"
#include "risadmit/geometry.hpp"

using namespace risadmit;

namespace {

struct Rotation {
  double m[3][3];
  Point3 apply(const Point3& p) const {
    return {m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z, m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
            m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z};
  }
};

// Rotation from a random unit quaternion.
Rotation random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  double w = g(rng), x = g(rng), y = g(rng), z = g(rng);
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n, x /= n, y /= n, z /= n;
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
           {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
           {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

Point3 random_point(std::mt19937_64& rng, double span) {
  std::uniform_real_distribution<double> u(-span, span);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("reference_direction subtracts componentwise") {
  const Direction3 a = reference_direction({0, 0, 0}, {1, 0, 0});
  CHECK(a.dx() == 1.0);
  CHECK(a.dy() == 0.0);
  CHECK(a.dz() == 0.0);

  const Direction3 b = reference_direction({0, 0, 10}, {100, 0, 25});
  CHECK(b.dx() == 100.0);
  CHECK(b.dy() == 0.0);
  CHECK(b.dz() == 15.0);

  CHECK_THROWS_AS(reference_direction({1, 2, 3}, {1, 2, 3}), DegenerateGeometry);
}

TEST_CASE("Direction3 and AngleDeg reject invalid values") {
  CHECK_THROWS_AS(Direction3(0, 0, 0), DegenerateGeometry);
  CHECK_THROWS_AS(Direction3(NAN, 1, 0), DegenerateGeometry);
  CHECK(Direction3(3, 4, 0).norm() == doctest::Approx(5.0));

  CHECK_NOTHROW(AngleDeg(0.0));
  CHECK_NOTHROW(AngleDeg(180.0));
  CHECK_THROWS_AS(AngleDeg(-1e-9), InvalidConfig);
  CHECK_THROWS_AS(AngleDeg(180.0001), InvalidConfig);
  CHECK_THROWS_AS(AngleDeg(NAN), InvalidConfig);
  CHECK(AngleDeg(90).radians() == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("angular_deviation on axis-aligned points") {
  const Point3 o{0, 0, 0};
  const Point3 bs{1, 0, 0};
  CHECK(angular_deviation(o, bs, {2, 0, 0}).value() == 0.0);
  CHECK(angular_deviation(o, bs, {0, 1, 0}).value() == doctest::Approx(90.0).epsilon(1e-12));
  CHECK(angular_deviation(o, bs, {1, 1, 0}).value() == doctest::Approx(45.0).epsilon(1e-12));
  CHECK(angular_deviation(o, bs, {-3, 0, 0}).value() == 180.0);

  CHECK_THROWS_AS(angular_deviation(o, o, {1, 1, 1}), DegenerateGeometry);
  CHECK_THROWS_AS(angular_deviation(o, bs, o), DegenerateGeometry);
  CHECK_THROWS_AS(angular_deviation(o, bs, {INFINITY, 0, 0}), DegenerateGeometry);
}

TEST_CASE("cosine_to_degrees clamps drift and rejects NaN") {
  CHECK(cosine_to_degrees(1.0 + 1e-15) == 0.0);
  CHECK(cosine_to_degrees(-1.0 - 1e-15) == doctest::Approx(180.0));
  CHECK(cosine_to_degrees(0.5) == doctest::Approx(60.0));
  CHECK_THROWS_AS(cosine_to_degrees(NAN), DegenerateGeometry);
}

TEST_CASE("angle stays in range for nearly collinear points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(1e-3, 1e6);
  std::uniform_real_distribution<double> eps(-1e-12, 1e-12);
  for (int k = 0; k < 2000; ++k) {
    const Point3 ris = random_point(rng, 100);
    const Point3 bs = random_point(rng, 100);
    if (ris == bs) continue;
    const double s = (k % 2 == 0) ? t(rng) : -t(rng);
    const Point3 user{ris.x + s * (bs.x - ris.x) + eps(rng), ris.y + s * (bs.y - ris.y) + eps(rng),
                      ris.z + s * (bs.z - ris.z) + eps(rng)};
    if (user == ris) continue;
    const double a = angular_deviation(ris, bs, user).value();
    CHECK(a >= 0.0);
    CHECK(a <= 180.0);
    CHECK((s > 0 ? a : 180.0 - a) < 1e-3);
  }
}

TEST_CASE("angle is invariant under rigid motions") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const Point3 ris = random_point(rng, 200);
    const Point3 bs = random_point(rng, 200);
    const Point3 user = random_point(rng, 200);
    const double before = angular_deviation(ris, bs, user).value();

    const Rotation rot = random_rotation(rng);
    const Point3 shift = random_point(rng, 500);
    auto move = [&](const Point3& p) {
      const Point3 q = rot.apply(p);
      return Point3{q.x + shift.x, q.y + shift.y, q.z + shift.z};
    };
    const double after = angular_deviation(move(ris), move(bs), move(user)).value();
    CHECK(after == doctest::Approx(before).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("angle is invariant when the user slides along its ray") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int k = 0; k < 500; ++k) {
    const Point3 ris = random_point(rng, 100);
    const Point3 bs = random_point(rng, 100);
    const Point3 user = random_point(rng, 100);
    const double s = scale(rng);
    const Point3 far{ris.x + s * (user.x - ris.x), ris.y + s * (user.y - ris.y), ris.z + s * (user.z - ris.z)};
    CHECK(angular_deviation(ris, bs, far).value() ==
          doctest::Approx(angular_deviation(ris, bs, user).value()).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("distance") {
  CHECK(distance({0, 0, 0}, {3, 4, 12}) == 13.0);
  CHECK(distance({1, 1, 1}, {1, 1, 1}) == 0.0);
}
