// Compiled with -mavx2 only; reached through value_grid_for() after a CPU check.
#include "cda/kernels/value_grid.hpp"

#include <immintrin.h>

#include <limits>

namespace cda::kernels {

double value_grid_avx2(std::span<const double> belief, std::span<const double> surplus,
                       double on_success, double on_failure, std::span<double> out) {
  const std::size_t n = out.size();
  const double* b = belief.data();
  const double* s = surplus.data();
  double* o = out.data();

  const __m256d succ = _mm256_set1_pd(on_success);
  const __m256d fail = _mm256_set1_pd(on_failure);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d vmax = _mm256_set1_pd(-std::numeric_limits<double>::infinity());

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d hit = _mm256_mul_pd(vb, _mm256_add_pd(_mm256_loadu_pd(s + i), succ));
    const __m256d miss = _mm256_mul_pd(_mm256_sub_pd(one, vb), fail);
    const __m256d v = _mm256_add_pd(hit, miss);
    _mm256_storeu_pd(o + i, v);
    vmax = _mm256_max_pd(vmax, v);
  }

  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmax);
  double best = lanes[0];
  for (int k = 1; k < 4; ++k)
    if (lanes[k] > best) best = lanes[k];

  for (; i < n; ++i) {
    const double hit = b[i] * (s[i] + on_success);
    const double miss = (1.0 - b[i]) * on_failure;
    const double v = hit + miss;
    o[i] = v;
    if (v > best) best = v;
  }
  return best;
}

}  // namespace cda::kernels
