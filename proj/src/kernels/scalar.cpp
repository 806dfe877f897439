#include <cmath>

#include "subattack/kernels.hpp"

namespace subattack::kernels::scalar {

void cosine_of_angle_row(const AffinePair& c, std::span<const double> cos_b,
                         std::span<const double> sin_b, std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double x = c.x0 + c.x_cos * cos_b[j] + c.x_sin * sin_b[j];
    const double y = c.y0 + c.y_cos * cos_b[j] + c.y_sin * sin_b[j];
    const double rho = std::sqrt(x * x + y * y);
    out[j] = rho > 0.0 ? x / rho : 1.0;
  }
}

std::size_t argmin(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

void rank_one_update(std::span<const double> x, std::span<const double> a,
                     std::span<const double> b, std::span<double> out) {
  const std::size_t rows = a.size();
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double bj = b[j];
    const double* xc = x.data() + j * rows;
    double* oc = out.data() + j * rows;
    for (std::size_t i = 0; i < rows; ++i) oc[i] = xc[i] + a[i] * bj;
  }
}

double sum_squares(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s;
}

}  // namespace subattack::kernels::scalar
