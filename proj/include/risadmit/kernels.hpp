#pragma once

// Batch geometry kernels over structure-of-arrays point sets.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. The variants evaluate the same operations in
// the same order without fused multiply-add, so their outputs are bitwise
// identical; tests/test_kernels.cpp holds them to that.

#include <cstddef>
#include <span>
#include <string_view>

namespace risadmit::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

// Best ISA supported by both this build and the running CPU.
Isa detected_isa();

// ISA used by the dispatching entry points. Defaults to detected_isa();
// may be pinned (e.g. to kScalar) for debugging. Pinning an unavailable ISA
// falls back to the scalar path.
Isa active_isa();
void set_active_isa(Isa isa);

struct Vec3 {
  double x;
  double y;
  double z;
};

struct PointsView {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> z;

  std::size_t size() const { return x.size(); }
};

// out[i] = |p_i - origin|.
void distances(Vec3 origin, PointsView points, std::span<double> out);

// out[i] = cosine of the angle between `reference` and (p_i - origin).
// `reference` must have nonzero norm. Points coinciding with `origin` yield
// NaN; callers detect and reject those.
void cosines_to_reference(Vec3 origin, Vec3 reference, PointsView points, std::span<double> out);

namespace scalar {
void distances(Vec3 origin, PointsView points, std::span<double> out);
void cosines_to_reference(Vec3 origin, Vec3 reference, PointsView points, std::span<double> out);
}  // namespace scalar

#if defined(RISADMIT_HAVE_AVX2)
namespace avx2 {
void distances(Vec3 origin, PointsView points, std::span<double> out);
void cosines_to_reference(Vec3 origin, Vec3 reference, PointsView points, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace risadmit::kernels
