#include "subattack/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <thread>
#include <vector>

#include "subattack/error.hpp"
#include "subattack/kernels.hpp"
#include "subattack/random.hpp"

namespace subattack {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

struct TrialBest {
  double theta = -1.0;
  std::uint64_t trial = 0;
};

bool better(const TrialBest& lhs, const TrialBest& rhs) {
  return lhs.theta > rhs.theta || (lhs.theta == rhs.theta && lhs.trial < rhs.trial);
}

// Runs eval(t) for every trial and keeps the maximum, lowest index first.
template <typename Eval>
TrialBest best_trial(std::uint64_t trials, unsigned threads, Eval eval) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));

  auto scan = [&eval](std::uint64_t begin, std::uint64_t end) {
    TrialBest best;
    for (std::uint64_t t = begin; t < end; ++t) {
      const TrialBest cand{eval(t), t};
      if (better(cand, best)) best = cand;
    }
    return best;
  };
  if (workers <= 1) return scan(0, trials);

  std::vector<TrialBest> partial(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min<std::uint64_t>(trials, w * chunk);
    const std::uint64_t end = std::min<std::uint64_t>(trials, begin + chunk);
    pool.emplace_back([&, w, begin, end] { partial[w] = scan(begin, end); });
  }
  for (auto& t : pool) t.join();
  TrialBest best;
  for (const auto& p : partial) {
    if (better(p, best)) best = p;
  }
  return best;
}

template <typename Dense>
std::span<const double> view(const Dense& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

struct RankOneDraw {
  Vector a;
  Vector b;
};

RankOneDraw draw_rank_one(const SearchConfig& cfg, std::uint64_t trial, Index d, Index n,
                          double eta) {
  Rng rng = Rng::for_trial(cfg.seed, trial);
  RankOneDraw out{gaussian_vector(rng, d), gaussian_vector(rng, n)};
  out.b /= std::sqrt(kernels::sum_squares(view(out.b)));
  out.a *= eta / std::sqrt(kernels::sum_squares(view(out.a)));
  return out;
}

Matrix draw_unconstrained(const SearchConfig& cfg, std::uint64_t trial, Index d, Index n,
                          double eta) {
  Rng rng = Rng::for_trial(cfg.seed, trial);
  Matrix delta = gaussian_matrix(rng, d, n);
  delta *= eta / std::sqrt(kernels::sum_squares(view(delta)));
  return delta;
}

// Golden-section maximisation of f on [lo, hi]; returns the best abscissa.
template <typename F>
double golden_max(F f, double lo, double hi, int steps) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < steps; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? x1 : x2;
}

}  // namespace

void validate(const SearchConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::InvalidArgument, "oracle needs trials >= 1");
  if (cfg.grid_resolution < 2) {
    throw Error(ErrorKind::InvalidArgument, "oracle needs grid_resolution >= 2");
  }
  if (cfg.refine_steps < 0) throw Error(ErrorKind::InvalidArgument, "refine_steps must be >= 0");
}

double distance_to_leading(const OrthonormalBasis& base, const Matrix& y) {
  const Index k = base.dim();
  Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeThinU);
  return asimov_distance(base, OrthonormalBasis(svd.matrixU().leftCols(k)));
}

RandomRankOneBest random_rank_one(const DataMatrix& x, Index k, const AttackBudget& budget,
                                  const SearchConfig& cfg) {
  validate(cfg);
  const OrthonormalBasis base = leading_subspace(x, k);
  const Index d = x.rows();
  const Index n = x.cols();
  const double eta = budget.eta;

  const TrialBest best = best_trial(cfg.trials, cfg.threads, [&](std::uint64_t t) {
    const RankOneDraw draw = draw_rank_one(cfg, t, d, n, eta);
    return distance_to_leading(base, apply_rank_one(x.values(), draw.a, draw.b));
  });

  RankOneDraw draw = draw_rank_one(cfg, best.trial, d, n, eta);
  RandomRankOneBest out;
  out.attack.a = std::move(draw.a);
  out.attack.b = std::move(draw.b);
  out.theta = best.theta;
  out.trial = best.trial;
  return out;
}

RandomUnconstrainedBest random_unconstrained(const DataMatrix& x, Index k,
                                             const AttackBudget& budget, const SearchConfig& cfg) {
  validate(cfg);
  const OrthonormalBasis base = leading_subspace(x, k);
  const Index d = x.rows();
  const Index n = x.cols();
  const double eta = budget.eta;

  const TrialBest best = best_trial(cfg.trials, cfg.threads, [&](std::uint64_t t) {
    return distance_to_leading(base, x.values() + draw_unconstrained(cfg, t, d, n, eta));
  });

  RandomUnconstrainedBest out;
  out.delta = draw_unconstrained(cfg, best.trial, d, n, eta);
  out.theta = best.theta;
  out.trial = best.trial;
  return out;
}

AngleSearchResult grid_search_angles(double sigma_k, double sigma_k1, double eta,
                                     const SearchConfig& cfg) {
  validate(cfg);
  const Index res = cfg.grid_resolution;
  const double step = kHalfPi / static_cast<double>(res - 1);

  std::vector<double> cos_b(static_cast<std::size_t>(res));
  std::vector<double> sin_b(static_cast<std::size_t>(res));
  for (Index j = 0; j < res; ++j) {
    const double beta = kHalfPi + step * static_cast<double>(j);
    cos_b[static_cast<std::size_t>(j)] = std::cos(beta);
    sin_b[static_cast<std::size_t>(j)] = std::sin(beta);
  }

  // The rotation is half the angle of (a_x, a_y), so the largest distance is
  // the smallest cosine a_x / |(a_x, a_y)|. For fixed alpha both components
  // are affine in (cos beta, sin beta).
  const double d = sigma_k * sigma_k - sigma_k1 * sigma_k1;
  std::vector<double> row(static_cast<std::size_t>(res));
  double best_cos = 2.0;
  Index best_i = 0;
  Index best_j = 0;
  for (Index i = 0; i < res; ++i) {
    const double alpha = step * static_cast<double>(i);
    const double ca = std::cos(alpha);
    const double sa = std::sin(alpha);
    kernels::AffinePair c;
    c.x0 = d + eta * eta * (ca * ca - sa * sa);
    c.x_cos = 2.0 * sigma_k * eta * ca;
    c.x_sin = -2.0 * sigma_k1 * eta * sa;
    c.y0 = 2.0 * eta * eta * ca * sa;
    c.y_cos = 2.0 * eta * sigma_k * sa;
    c.y_sin = 2.0 * eta * sigma_k1 * ca;
    kernels::cosine_of_angle_row(c, cos_b, sin_b, row);
    const std::size_t j = kernels::argmin(row);
    if (row[j] < best_cos) {
      best_cos = row[j];
      best_i = i;
      best_j = static_cast<Index>(j);
    }
  }

  AngleSearchResult out;
  out.alpha = step * static_cast<double>(best_i);
  out.beta = kHalfPi + step * static_cast<double>(best_j);
  out.theta = theta_from_angles(sigma_k, sigma_k1, eta, out.alpha, out.beta);
  if (cfg.refine_steps == 0) return out;

  auto theta_at = [&](double a, double b) { return theta_from_angles(sigma_k, sigma_k1, eta, a, b); };
  constexpr int kSweeps = 3;
  for (int sweep = 0; sweep < kSweeps; ++sweep) {
    const double a_lo = std::max(0.0, out.alpha - step);
    const double a_hi = std::min(kHalfPi, out.alpha + step);
    const double a = golden_max([&](double v) { return theta_at(v, out.beta); }, a_lo, a_hi,
                                cfg.refine_steps);
    if (const double t = theta_at(a, out.beta); t > out.theta) {
      out.alpha = a;
      out.theta = t;
    }
    const double b_lo = std::max(kHalfPi, out.beta - step);
    const double b_hi = std::min(std::numbers::pi, out.beta + step);
    const double b = golden_max([&](double v) { return theta_at(out.alpha, v); }, b_lo, b_hi,
                                cfg.refine_steps);
    if (const double t = theta_at(out.alpha, b); t > out.theta) {
      out.beta = b;
      out.theta = t;
    }
  }
  return out;
}

double stationarity_residual(double sigma_k, double sigma_k1, double eta, double alpha,
                             double beta, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "finite-difference step must be > 0");
  auto phi = [&](double a, double b) { return rotation_from_angles(sigma_k, sigma_k1, eta, a, b); };
  const double da = (phi(alpha + step, beta) - phi(alpha - step, beta)) / (2.0 * step);
  const double db = (phi(alpha, beta + step) - phi(alpha, beta - step)) / (2.0 * step);
  return std::max(std::abs(da), std::abs(db));
}

PrincipalAngles brute_force_principal_angles(const OrthonormalBasis& a, const OrthonormalBasis& b,
                                             const SearchConfig& cfg) {
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim()) {
    throw Error(ErrorKind::InvalidDimension, "bases differ in shape");
  }
  const Index k = a.dim();
  if (k > 3 || a.ambient_dim() > 6) {
    throw Error(ErrorKind::OracleTooExpensive, "brute-force principal angles limited to k <= 3, d <= 6");
  }
  // In subspace coordinates u = A x, v = B y and u^T v = x^T (A^T B) y.
  const Matrix m = a.columns().transpose() * b.columns();
  constexpr int kMaxIter = 20000;
  const std::uint64_t starts = std::clamp<std::uint64_t>(cfg.trials, 1, 16);

  Matrix xs(k, 0);
  Matrix ys(k, 0);
  auto deflate = [](Vector v, const Matrix& prev) {
    for (Index c = 0; c < prev.cols(); ++c) v -= prev.col(c).dot(v) * prev.col(c);
    return v;
  };

  PrincipalAngles out;
  for (Index level = 0; level < k; ++level) {
    double best_val = -1.0;
    Vector best_x = Vector::Zero(k);
    Vector best_y = Vector::Zero(k);
    for (std::uint64_t s = 0; s < starts; ++s) {
      Rng rng = Rng::for_trial(cfg.seed, s + static_cast<std::uint64_t>(level) * 1000);
      Vector x = deflate(gaussian_vector(rng, k), xs);
      if (x.norm() == 0.0) continue;
      x.normalize();
      Vector y = deflate(m.transpose() * x, ys);
      if (y.norm() == 0.0) y = deflate(gaussian_vector(rng, k), ys);
      y.normalize();
      double val = x.dot(m * y);
      for (int it = 0; it < kMaxIter; ++it) {
        Vector nx = deflate(m * y, xs);
        if (nx.norm() == 0.0) break;
        x = nx.normalized();
        Vector ny = deflate(m.transpose() * x, ys);
        if (ny.norm() == 0.0) break;
        y = ny.normalized();
        const double next = x.dot(m * y);
        const bool done = std::abs(next - val) <= 1e-16;
        val = next;
        if (done) break;
      }
      if (val > best_val) {
        best_val = val;
        best_x = x;
        best_y = y;
      }
    }
    out.angles.push_back(std::acos(std::clamp(best_val, 0.0, 1.0)));
    xs.conservativeResize(Eigen::NoChange, level + 1);
    ys.conservativeResize(Eigen::NoChange, level + 1);
    xs.col(level) = best_x;
    ys.col(level) = best_y;
  }
  std::sort(out.angles.begin(), out.angles.end());
  return out;
}

}  // namespace subattack
