// Compiled with -mavx2 -mfma; only reached through dispatch after a CPU check.

#include <immintrin.h>

#include <cmath>

#include "subattack/kernels.hpp"

namespace subattack::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_min_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

void cosine_of_angle_row(const AffinePair& c, std::span<const double> cos_b,
                         std::span<const double> sin_b, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d x0 = _mm256_set1_pd(c.x0);
  const __m256d xc = _mm256_set1_pd(c.x_cos);
  const __m256d xs = _mm256_set1_pd(c.x_sin);
  const __m256d y0 = _mm256_set1_pd(c.y0);
  const __m256d yc = _mm256_set1_pd(c.y_cos);
  const __m256d ys = _mm256_set1_pd(c.y_sin);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);

  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d cb = _mm256_loadu_pd(cos_b.data() + j);
    const __m256d sb = _mm256_loadu_pd(sin_b.data() + j);
    const __m256d x = _mm256_fmadd_pd(xs, sb, _mm256_fmadd_pd(xc, cb, x0));
    const __m256d y = _mm256_fmadd_pd(ys, sb, _mm256_fmadd_pd(yc, cb, y0));
    const __m256d rho = _mm256_sqrt_pd(_mm256_fmadd_pd(x, x, _mm256_mul_pd(y, y)));
    const __m256d positive = _mm256_cmp_pd(rho, zero, _CMP_GT_OQ);
    // rho == 0 lanes divide by one instead and are then replaced.
    const __m256d ratio = _mm256_div_pd(x, _mm256_blendv_pd(one, rho, positive));
    _mm256_storeu_pd(out.data() + j, _mm256_blendv_pd(one, ratio, positive));
  }
  for (; j < n; ++j) {
    const double x = std::fma(c.x_sin, sin_b[j], std::fma(c.x_cos, cos_b[j], c.x0));
    const double y = std::fma(c.y_sin, sin_b[j], std::fma(c.y_cos, cos_b[j], c.y0));
    const double rho = std::sqrt(std::fma(x, x, y * y));
    out[j] = rho > 0.0 ? x / rho : 1.0;
  }
}

std::size_t argmin(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 8) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (values[i] < values[best]) best = i;
    return best;
  }
  __m256d m = _mm256_loadu_pd(values.data());
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) m = _mm256_min_pd(m, _mm256_loadu_pd(values.data() + i));
  double best = hmin(m);
  for (; i < n; ++i) best = values[i] < best ? values[i] : best;

  // Second pass locates the first occurrence of the minimum.
  const __m256d target = _mm256_set1_pd(best);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const int mask =
        _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(values.data() + j), target, _CMP_EQ_OQ));
    if (mask != 0) return j + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; j < n; ++j)
    if (values[j] == best) return j;
  return 0;
}

void rank_one_update(std::span<const double> x, std::span<const double> a,
                     std::span<const double> b, std::span<double> out) {
  const std::size_t rows = a.size();
  for (std::size_t j = 0; j < b.size(); ++j) {
    const __m256d bj = _mm256_set1_pd(b[j]);
    const double* xc = x.data() + j * rows;
    double* oc = out.data() + j * rows;
    std::size_t i = 0;
    for (; i + 4 <= rows; i += 4) {
      _mm256_storeu_pd(oc + i, _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), bj,
                                               _mm256_loadu_pd(xc + i)));
    }
    for (; i < rows; ++i) oc[i] = std::fma(a[i], b[j], xc[i]);
  }
}

double sum_squares(std::span<const double> values) {
  const std::size_t n = values.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(values.data() + i);
    const __m256d v1 = _mm256_loadu_pd(values.data() + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(values.data() + i);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s = std::fma(values[i], values[i], s);
  return s;
}

}  // namespace subattack::kernels::avx2
