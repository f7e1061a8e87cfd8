#pragma once

#include <cmath>

namespace risadmit {

// Position in meters.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
  friend bool operator==(const Point3&, const Point3&) = default;
};

// A vector with strictly positive Euclidean norm.
class Direction3 {
 public:
  // Throws DegenerateGeometry for the zero vector or non-finite components.
  Direction3(double dx, double dy, double dz);

  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double dz() const { return dz_; }
  double norm() const;

 private:
  double dx_;
  double dy_;
  double dz_;
};

// Unsigned angle in degrees, always within [0, 180].
class AngleDeg {
 public:
  // Throws InvalidConfig when value is NaN or outside [0, 180].
  explicit AngleDeg(double value);

  double value() const { return value_; }
  double radians() const;

  friend auto operator<=>(const AngleDeg&, const AngleDeg&) = default;

 private:
  double value_;
};

double distance(const Point3& a, const Point3& b);

// Vector from the RIS to the base station.
Direction3 reference_direction(const Point3& ris, const Point3& bs);

// 3-D angle between the RIS->BS reference direction and the RIS->user
// direction. The cosine is clamped to [-1, 1] before arccos.
AngleDeg angular_deviation(const Point3& ris, const Point3& bs, const Point3& user);

// Converts a raw cosine (possibly drifted outside [-1, 1], or NaN) to degrees.
double cosine_to_degrees(double cosine);

}  // namespace risadmit
