// Compiled with -mavx2 only; nothing here may be reached unless
// detected_isa() reported AVX2.

#include <immintrin.h>

#include <cassert>
#include <cmath>

#include "risadmit/kernels.hpp"

namespace risadmit::kernels::avx2 {

void distances(Vec3 origin, PointsView points, std::span<double> out) {
  assert(out.size() >= points.size());
  const std::size_t n = points.size();
  const __m256d ox = _mm256_set1_pd(origin.x);
  const __m256d oy = _mm256_set1_pd(origin.y);
  const __m256d oz = _mm256_set1_pd(origin.z);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(points.x.data() + i), ox);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(points.y.data() + i), oy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(points.z.data() + i), oz);
    const __m256d sq = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                                     _mm256_mul_pd(dz, dz));
    _mm256_storeu_pd(out.data() + i, _mm256_sqrt_pd(sq));
  }
  if (i < n) {
    scalar::distances(origin,
                      PointsView{points.x.subspan(i), points.y.subspan(i), points.z.subspan(i)},
                      out.subspan(i));
  }
}

void cosines_to_reference(Vec3 origin, Vec3 reference, PointsView points, std::span<double> out) {
  assert(out.size() >= points.size());
  const std::size_t n = points.size();
  const double ref_norm =
      std::sqrt((reference.x * reference.x + reference.y * reference.y) + reference.z * reference.z);

  const __m256d ox = _mm256_set1_pd(origin.x);
  const __m256d oy = _mm256_set1_pd(origin.y);
  const __m256d oz = _mm256_set1_pd(origin.z);
  const __m256d rx = _mm256_set1_pd(reference.x);
  const __m256d ry = _mm256_set1_pd(reference.y);
  const __m256d rz = _mm256_set1_pd(reference.z);
  const __m256d rn = _mm256_set1_pd(ref_norm);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ux = _mm256_sub_pd(_mm256_loadu_pd(points.x.data() + i), ox);
    const __m256d uy = _mm256_sub_pd(_mm256_loadu_pd(points.y.data() + i), oy);
    const __m256d uz = _mm256_sub_pd(_mm256_loadu_pd(points.z.data() + i), oz);
    const __m256d dot = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(rx, ux), _mm256_mul_pd(ry, uy)),
                                      _mm256_mul_pd(rz, uz));
    const __m256d norm = _mm256_sqrt_pd(_mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(ux, ux), _mm256_mul_pd(uy, uy)), _mm256_mul_pd(uz, uz)));
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(dot, _mm256_mul_pd(rn, norm)));
  }
  if (i < n) {
    scalar::cosines_to_reference(
        origin, reference,
        PointsView{points.x.subspan(i), points.y.subspan(i), points.z.subspan(i)}, out.subspan(i));
  }
}

}  // namespace risadmit::kernels::avx2
