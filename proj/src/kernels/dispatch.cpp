#include <atomic>
#include <cstdlib>
#include <string>

#include "subattack/error.hpp"
#include "subattack/kernels.hpp"

namespace subattack::kernels {

namespace {

struct Table {
  Isa isa;
  void (*cosine_row)(const AffinePair&, std::span<const double>, std::span<const double>,
                     std::span<double>);
  std::size_t (*argmin)(std::span<const double>);
  void (*rank_one_update)(std::span<const double>, std::span<const double>,
                          std::span<const double>, std::span<double>);
  double (*sum_squares)(std::span<const double>);
};

constexpr Table kScalar{Isa::Scalar, scalar::cosine_of_angle_row, scalar::argmin,
                        scalar::rank_one_update, scalar::sum_squares};
#ifdef SUBATTACK_HAVE_AVX2_KERNELS
constexpr Table kAvx2{Isa::Avx2, avx2::cosine_of_angle_row, avx2::argmin,
                      avx2::rank_one_update, avx2::sum_squares};
#endif
#ifdef SUBATTACK_HAVE_NEON_KERNELS
constexpr Table kNeon{Isa::Neon, neon::cosine_of_angle_row, neon::argmin,
                      neon::rank_one_update, neon::sum_squares};
#endif

const Table* table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return &kScalar;
#ifdef SUBATTACK_HAVE_AVX2_KERNELS
    case Isa::Avx2: return &kAvx2;
#endif
#ifdef SUBATTACK_HAVE_NEON_KERNELS
    case Isa::Neon: return &kNeon;
#endif
    default: return nullptr;
  }
}

const Table* detect() {
  if (const char* forced = std::getenv("SUBATTACK_ISA")) {
    const std::string name(forced);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (name == isa_name(isa) && isa_supported(isa)) return table_for(isa);
    }
  }
  if (isa_supported(Isa::Avx2)) return table_for(Isa::Avx2);
  if (isa_supported(Isa::Neon)) return table_for(Isa::Neon);
  return &kScalar;
}

std::atomic<const Table*>& active() {
  static std::atomic<const Table*> table{detect()};
  return table;
}

const Table& current() { return *active().load(std::memory_order_acquire); }

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#ifdef SUBATTACK_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#ifdef SUBATTACK_HAVE_NEON_KERNELS
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current().isa; }

void set_isa(Isa isa) {
  if (!isa_supported(isa))
    throw Error(ErrorKind::InvalidArgument,
                "instruction set '" + std::string(isa_name(isa)) + "' is not available");
  active().store(table_for(isa), std::memory_order_release);
}

void cosine_of_angle_row(const AffinePair& coeffs, std::span<const double> cos_b,
                         std::span<const double> sin_b, std::span<double> out) {
  current().cosine_row(coeffs, cos_b, sin_b, out);
}

std::size_t argmin(std::span<const double> values) { return current().argmin(values); }

void rank_one_update(std::span<const double> x, std::span<const double> a,
                     std::span<const double> b, std::span<double> out) {
  current().rank_one_update(x, a, b, out);
}

double sum_squares(std::span<const double> values) { return current().sum_squares(values); }

}  // namespace subattack::kernels
