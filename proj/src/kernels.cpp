#include "risadmit/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cmath>

namespace risadmit::kernels {

namespace {

std::atomic<int> g_active{-1};

bool cpu_has_avx2() {
#if defined(RISADMIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
  static const Isa isa = cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
  return isa;
}

Isa active_isa() {
  const int v = g_active.load(std::memory_order_relaxed);
  return v < 0 ? detected_isa() : static_cast<Isa>(v);
}

void set_active_isa(Isa isa) {
  if (isa == Isa::kAvx2 && detected_isa() != Isa::kAvx2) {
    isa = Isa::kScalar;
  }
  g_active.store(static_cast<int>(isa), std::memory_order_relaxed);
}

namespace scalar {

void distances(Vec3 origin, PointsView points, std::span<double> out) {
  assert(out.size() >= points.size());
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = points.x[i] - origin.x;
    const double dy = points.y[i] - origin.y;
    const double dz = points.z[i] - origin.z;
    out[i] = std::sqrt((dx * dx + dy * dy) + dz * dz);
  }
}

void cosines_to_reference(Vec3 origin, Vec3 reference, PointsView points, std::span<double> out) {
  assert(out.size() >= points.size());
  const double ref_norm =
      std::sqrt((reference.x * reference.x + reference.y * reference.y) + reference.z * reference.z);
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double ux = points.x[i] - origin.x;
    const double uy = points.y[i] - origin.y;
    const double uz = points.z[i] - origin.z;
    const double dot = (reference.x * ux + reference.y * uy) + reference.z * uz;
    const double norm = std::sqrt((ux * ux + uy * uy) + uz * uz);
    out[i] = dot / (ref_norm * norm);
  }
}

}  // namespace scalar

void distances(Vec3 origin, PointsView points, std::span<double> out) {
#if defined(RISADMIT_HAVE_AVX2)
  if (active_isa() == Isa::kAvx2) {
    avx2::distances(origin, points, out);
    return;
  }
#endif
  scalar::distances(origin, points, out);
}

void cosines_to_reference(Vec3 origin, Vec3 reference, PointsView points, std::span<double> out) {
#if defined(RISADMIT_HAVE_AVX2)
  if (active_isa() == Isa::kAvx2) {
    avx2::cosines_to_reference(origin, reference, points, out);
    return;
  }
#endif
  scalar::cosines_to_reference(origin, reference, points, out);
}

}  // namespace risadmit::kernels
