#include "subattack/report.hpp"

namespace subattack {

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::FullRankCase1: return "FullRankCase1";
    case Regime::FullRankCase2: return "FullRankCase2";
    case Regime::LowRankCase1: return "LowRankCase1";
    case Regime::LowRankCase2: return "LowRankCase2";
    case Regime::KLtRankCase1: return "KLtRankCase1";
    case Regime::KLtRankCase2: return "KLtRankCase2";
    case Regime::UnconstrainedCase1: return "UnconstrainedCase1";
    case Regime::UnconstrainedCase2: return "UnconstrainedCase2";
  }
  return "Unknown";
}

bool is_saturating(Regime regime) {
  switch (regime) {
    case Regime::FullRankCase1:
    case Regime::LowRankCase1:
    case Regime::KLtRankCase1:
    case Regime::UnconstrainedCase1:
      return true;
    default:
      return false;
  }
}

}  // namespace subattack
