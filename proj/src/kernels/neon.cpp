#include <arm_neon.h>

#include <cmath>

#include "subattack/kernels.hpp"

namespace subattack::kernels::neon {

void cosine_of_angle_row(const AffinePair& c, std::span<const double> cos_b,
                         std::span<const double> sin_b, std::span<double> out) {
  const std::size_t n = out.size();
  const float64x2_t x0 = vdupq_n_f64(c.x0);
  const float64x2_t xc = vdupq_n_f64(c.x_cos);
  const float64x2_t xs = vdupq_n_f64(c.x_sin);
  const float64x2_t y0 = vdupq_n_f64(c.y0);
  const float64x2_t yc = vdupq_n_f64(c.y_cos);
  const float64x2_t ys = vdupq_n_f64(c.y_sin);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);

  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t cb = vld1q_f64(cos_b.data() + j);
    const float64x2_t sb = vld1q_f64(sin_b.data() + j);
    const float64x2_t x = vfmaq_f64(vfmaq_f64(x0, xc, cb), xs, sb);
    const float64x2_t y = vfmaq_f64(vfmaq_f64(y0, yc, cb), ys, sb);
    const float64x2_t rho = vsqrtq_f64(vfmaq_f64(vmulq_f64(y, y), x, x));
    const uint64x2_t positive = vcgtq_f64(rho, zero);
    const float64x2_t ratio = vdivq_f64(x, vbslq_f64(positive, rho, one));
    vst1q_f64(out.data() + j, vbslq_f64(positive, ratio, one));
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
  if (n < 4) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (values[i] < values[best]) best = i;
    return best;
  }
  float64x2_t m = vld1q_f64(values.data());
  std::size_t i = 2;
  for (; i + 2 <= n; i += 2) m = vminq_f64(m, vld1q_f64(values.data() + i));
  double best = vminvq_f64(m);
  for (; i < n; ++i) best = values[i] < best ? values[i] : best;
  for (std::size_t j = 0; j < n; ++j)
    if (values[j] == best) return j;
  return 0;
}

void rank_one_update(std::span<const double> x, std::span<const double> a,
                     std::span<const double> b, std::span<double> out) {
  const std::size_t rows = a.size();
  for (std::size_t j = 0; j < b.size(); ++j) {
    const float64x2_t bj = vdupq_n_f64(b[j]);
    const double* xc = x.data() + j * rows;
    double* oc = out.data() + j * rows;
    std::size_t i = 0;
    for (; i + 2 <= rows; i += 2)
      vst1q_f64(oc + i, vfmaq_f64(vld1q_f64(xc + i), vld1q_f64(a.data() + i), bj));
    for (; i < rows; ++i) oc[i] = std::fma(a[i], b[j], xc[i]);
  }
}

double sum_squares(std::span<const double> values) {
  const std::size_t n = values.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t v0 = vld1q_f64(values.data() + i);
    const float64x2_t v1 = vld1q_f64(values.data() + i + 2);
    acc0 = vfmaq_f64(acc0, v0, v0);
    acc1 = vfmaq_f64(acc1, v1, v1);
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s = std::fma(values[i], values[i], s);
  return s;
}

}  // namespace subattack::kernels::neon
