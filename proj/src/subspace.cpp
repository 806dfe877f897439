#include "subattack/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subattack/error.hpp"

namespace subattack {

namespace {

// Index of the largest-magnitude entry; the first one wins on ties.
Index dominant_entry(const Eigen::Ref<const Vector>& col) {
  Index best = 0;
  double best_abs = -1.0;
  for (Index i = 0; i < col.size(); ++i) {
    const double v = std::abs(col(i));
    if (v > best_abs) {
      best_abs = v;
      best = i;
    }
  }
  return best;
}

std::string shape_of(Index r, Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw Error(ErrorKind::InvalidMatrix, "data matrix must be non-empty, got " +
                                              shape_of(values_.rows(), values_.cols()));
  }
  if (!values_.allFinite()) {
    throw Error(ErrorKind::InvalidMatrix, "data matrix has non-finite entries");
  }
}

Index SvdTriple::rank() const {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cut = rank_tol * sigma(0);
  Index r = 0;
  while (r < sigma.size() && sigma(r) > cut) ++r;
  return r;
}

double SvdTriple::sigma_at(Index i) const {
  return i >= 0 && i < sigma.size() ? sigma(i) : 0.0;
}

SvdTriple full_svd(const DataMatrix& m, double rank_tol) {
  const Matrix& x = m.values();
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);

  SvdTriple out;
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  out.sigma = svd.singularValues();
  out.rank_tol = rank_tol;

  const Index p = out.sigma.size();
  for (Index j = 0; j < out.u.cols(); ++j) {
    const Index i = dominant_entry(out.u.col(j));
    if (out.u(i, j) < 0.0) {
      out.u.col(j) = -out.u.col(j);
      if (j < p) out.v.col(j) = -out.v.col(j);
    }
  }
  for (Index j = p; j < out.v.cols(); ++j) {
    const Index i = dominant_entry(out.v.col(j));
    if (out.v(i, j) < 0.0) out.v.col(j) = -out.v.col(j);
  }
  return out;
}

OrthonormalBasis::OrthonormalBasis(Matrix columns, bool ambiguous)
    : columns_(std::move(columns)), ambiguous_(ambiguous) {
  if (columns_.cols() == 0 || columns_.cols() > columns_.rows()) {
    throw Error(ErrorKind::InvalidDimension,
                "basis must have 1 <= k <= d columns, got " + shape_of(columns_.rows(), columns_.cols()));
  }
  const Matrix gram = columns_.transpose() * columns_;
  const Matrix id = Matrix::Identity(columns_.cols(), columns_.cols());
  if (!columns_.allFinite() || (gram - id).cwiseAbs().maxCoeff() > kOrthogonalityTol) {
    throw Error(ErrorKind::InvalidMatrix, "basis columns are not orthonormal");
  }
}

OrthonormalBasis leading_subspace(const SvdTriple& svd, Index k, double tie_tol) {
  const Index p = std::min(svd.rows(), svd.cols());
  if (k < 1 || k > p) {
    throw Error(ErrorKind::InvalidDimension,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(p) + "]");
  }
  const double gap = svd.sigma_at(k - 1) - svd.sigma_at(k);
  const bool has_next = k < svd.rows();
  const bool ambiguous = has_next && std::abs(gap) <= tie_tol * svd.sigma_at(0);
  return OrthonormalBasis(svd.u.leftCols(k), ambiguous);
}

OrthonormalBasis leading_subspace(const DataMatrix& m, Index k, double tie_tol) {
  const Index p = std::min(m.rows(), m.cols());
  if (k < 1 || k > p) {
    throw Error(ErrorKind::InvalidDimension,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(p) + "]");
  }
  return leading_subspace(full_svd(m), k, tie_tol);
}

// Cosines lose resolution for small angles and sines for angles near pi/2,
// so each angle is taken from whichever of the two is better conditioned.
PrincipalAngles principal_angles(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim()) {
    throw Error(ErrorKind::InvalidDimension,
                "bases differ in shape: " + shape_of(a.ambient_dim(), a.dim()) + " vs " +
                    shape_of(b.ambient_dim(), b.dim()));
  }
  const Matrix& qa = a.columns();
  const Matrix& qb = b.columns();
  const Matrix cross = qa.transpose() * qb;
  const Matrix residual = qb - qa * cross;

  Eigen::JacobiSVD<Matrix> cos_svd(cross);
  Eigen::JacobiSVD<Matrix> sin_svd(residual);
  Vector cosines = cos_svd.singularValues();    // descending
  Vector sines = sin_svd.singularValues();      // descending

  const Index k = a.dim();
  PrincipalAngles out;
  out.angles.resize(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    const double c = std::clamp(cosines(i), 0.0, 1.0);
    const double s = std::clamp(i < sines.size() ? sines(sines.size() - 1 - i) : 0.0, 0.0, 1.0);
    out.angles[static_cast<std::size_t>(i)] = c * c >= 0.5 ? std::asin(s) : std::acos(c);
  }
  std::sort(out.angles.begin(), out.angles.end());
  return out;
}

double asimov_distance(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  return principal_angles(a, b).largest();
}

double subspace_shift(const Matrix& original, const Matrix& perturbed, Index k) {
  const auto before = leading_subspace(DataMatrix(original), k);
  const auto after = leading_subspace(DataMatrix(perturbed), k);
  return asimov_distance(before, after);
}

Matrix householder_to_first_axis(const Vector& v) {
  const Index m = v.size();
  Matrix h = Matrix::Identity(m, m);
  if (m < 2) return h;
  const double rest_sq = v.tail(m - 1).squaredNorm();
  if (rest_sq == 0.0) return h;
  const double norm = std::sqrt(v(0) * v(0) + rest_sq);
  const double s = v(0) < 0.0 ? -1.0 : 1.0;
  Vector w = v;
  // v(0) - s * norm, rewritten to avoid cancellation when v is nearly aligned.
  w(0) = -s * rest_sq / (std::abs(v(0)) + norm);
  h -= (2.0 / w.squaredNorm()) * (w * w.transpose());
  return h;
}

CompressedRankOne compress_rank_one_problem(const DataMatrix& x, Index k, const Vector& a,
                                            const Vector& b) {
  if (a.size() != x.rows() || b.size() != x.cols()) {
    throw Error(ErrorKind::InvalidDimension, "a and b must have lengths d and n");
  }
  const SvdTriple svd = full_svd(x);
  if (svd.rank() != k) {
    throw Error(ErrorKind::RankMismatch, "numerical rank is " + std::to_string(svd.rank()) +
                                             ", expected k=" + std::to_string(k));
  }
  const Vector ua = svd.u.transpose() * a;
  const Vector vb = svd.v.transpose() * b;

  auto fold = [k](const Vector& coords) {
    Vector out = Vector::Zero(k + 1);
    out.head(k) = coords.head(k);
    const Index tail = coords.size() - k;
    if (tail > 0) {
      const Vector t = coords.tail(tail);
      const double s = t(0) < 0.0 ? -1.0 : 1.0;
      out(k) = s * t.norm();
    }
    return out;
  };

  CompressedRankOne out;
  out.sigma_tilde = Matrix::Zero(k + 1, k + 1);
  for (Index i = 0; i < k; ++i) out.sigma_tilde(i, i) = svd.sigma(i);
  out.a = fold(ua);
  out.b = fold(vb);
  return out;
}

bool is_orthogonal(const Matrix& q, double tol) {
  if (q.rows() != q.cols() || !q.allFinite()) return false;
  const Matrix gram = q.transpose() * q;
  return (gram - Matrix::Identity(q.rows(), q.cols())).cwiseAbs().maxCoeff() <= tol;
}

DataMatrix unitary_conjugate(const DataMatrix& x, const Matrix& p, const Matrix& t) {
  if (p.rows() != x.rows() || t.rows() != x.cols()) {
    throw Error(ErrorKind::InvalidDimension, "conjugating factors do not match the matrix shape");
  }
  if (!is_orthogonal(p) || !is_orthogonal(t)) {
    throw Error(ErrorKind::InvalidMatrix, "conjugating factors must be orthogonal");
  }
  return DataMatrix(p * x.values() * t.transpose());
}

}  // namespace subattack
