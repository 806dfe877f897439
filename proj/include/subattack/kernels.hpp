#pragma once

// Data-parallel inner loops used by the search oracles.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is
// picked once at runtime from CPU capabilities; SUBATTACK_ISA=scalar|avx2|neon
// in the environment or set_isa() overrides the choice. Vector variants agree
// with the scalar reference up to floating-point reassociation and FMA
// contraction, never bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace subattack::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa active_isa();
/// Throws subattack::Error(InvalidArgument) when `isa` is not supported here.
void set_isa(Isa isa);

/// Coefficients of the two affine forms evaluated across one lattice row:
///   x(j) = x0 + x_cos * cos_b[j] + x_sin * sin_b[j]
///   y(j) = y0 + y_cos * cos_b[j] + y_sin * sin_b[j]
struct AffinePair {
  double x0 = 0.0;
  double x_cos = 0.0;
  double x_sin = 0.0;
  double y0 = 0.0;
  double y_cos = 0.0;
  double y_sin = 0.0;
};

/// out[j] = x(j) / hypot(x(j), y(j)), i.e. the cosine of atan2(y(j), x(j)).
/// A zero-length (x, y) maps to 1.
void cosine_of_angle_row(const AffinePair& coeffs, std::span<const double> cos_b,
                         std::span<const double> sin_b, std::span<double> out);

/// Index of the smallest value; ties resolve to the lowest index. Empty input
/// returns 0.
std::size_t argmin(std::span<const double> values);

/// out = x + a * b^T for a column-major `a.size()` x `b.size()` matrix x.
void rank_one_update(std::span<const double> x, std::span<const double> a,
                     std::span<const double> b, std::span<double> out);

double sum_squares(std::span<const double> values);

// Direct entry points, exposed so the equivalence tests can compare variants.
namespace scalar {
void cosine_of_angle_row(const AffinePair& coeffs, std::span<const double> cos_b,
                         std::span<const double> sin_b, std::span<double> out);
std::size_t argmin(std::span<const double> values);
void rank_one_update(std::span<const double> x, std::span<const double> a,
                     std::span<const double> b, std::span<double> out);
double sum_squares(std::span<const double> values);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SUBATTACK_HAVE_AVX2_KERNELS 1
namespace avx2 {
void cosine_of_angle_row(const AffinePair& coeffs, std::span<const double> cos_b,
                         std::span<const double> sin_b, std::span<double> out);
std::size_t argmin(std::span<const double> values);
void rank_one_update(std::span<const double> x, std::span<const double> a,
                     std::span<const double> b, std::span<double> out);
double sum_squares(std::span<const double> values);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define SUBATTACK_HAVE_NEON_KERNELS 1
namespace neon {
void cosine_of_angle_row(const AffinePair& coeffs, std::span<const double> cos_b,
                         std::span<const double> sin_b, std::span<double> out);
std::size_t argmin(std::span<const double> values);
void rank_one_update(std::span<const double> x, std::span<const double> a,
                     std::span<const double> b, std::span<double> out);
double sum_squares(std::span<const double> values);
}  // namespace neon
#endif

}  // namespace subattack::kernels
