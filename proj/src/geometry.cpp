#include "risadmit/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "risadmit/errors.hpp"
#include "risadmit/kernels.hpp"

namespace risadmit {

namespace {

kernels::Vec3 as_vec(const Point3& p) { return {p.x, p.y, p.z}; }

void require_finite(const Point3& p, const char* what) {
  if (!p.finite()) {
    throw DegenerateGeometry(std::string(what) + " has a non-finite coordinate");
  }
}

}  // namespace

Direction3::Direction3(double dx, double dy, double dz) : dx_(dx), dy_(dy), dz_(dz) {
  if (!std::isfinite(dx) || !std::isfinite(dy) || !std::isfinite(dz)) {
    throw DegenerateGeometry("direction has a non-finite component");
  }
  if (dx == 0.0 && dy == 0.0 && dz == 0.0) {
    throw DegenerateGeometry("zero vector has no direction");
  }
}

double Direction3::norm() const { return std::sqrt((dx_ * dx_ + dy_ * dy_) + dz_ * dz_); }

AngleDeg::AngleDeg(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 180.0)) {
    throw InvalidConfig("angle " + std::to_string(value) + " deg is outside [0, 180]");
  }
}

double AngleDeg::radians() const { return value_ * std::numbers::pi / 180.0; }

double distance(const Point3& a, const Point3& b) {
  const double xs[] = {b.x};
  const double ys[] = {b.y};
  const double zs[] = {b.z};
  double out = 0.0;
  kernels::scalar::distances(as_vec(a), {xs, ys, zs}, {&out, 1});
  return out;
}

Direction3 reference_direction(const Point3& ris, const Point3& bs) {
  require_finite(ris, "RIS position");
  require_finite(bs, "BS position");
  if (ris == bs) {
    throw DegenerateGeometry("RIS and BS coincide");
  }
  return Direction3(bs.x - ris.x, bs.y - ris.y, bs.z - ris.z);
}

double cosine_to_degrees(double cosine) {
  // NaN survives std::clamp; it only arises from a zero-length direction.
  if (std::isnan(cosine)) {
    throw DegenerateGeometry("angle undefined for a zero-length direction");
  }
  return std::acos(std::clamp(cosine, -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

AngleDeg angular_deviation(const Point3& ris, const Point3& bs, const Point3& user) {
  const Direction3 ref = reference_direction(ris, bs);
  require_finite(user, "user position");
  if (user == ris) {
    throw DegenerateGeometry("user coincides with the RIS");
  }
  const double xs[] = {user.x};
  const double ys[] = {user.y};
  const double zs[] = {user.z};
  double cosine = 0.0;
  kernels::scalar::cosines_to_reference(as_vec(ris), {ref.dx(), ref.dy(), ref.dz()}, {xs, ys, zs},
                                        {&cosine, 1});
  return AngleDeg(cosine_to_degrees(cosine));
}

}  // namespace risadmit
