#pragma once

// Dense linear-algebra substrate: SVD, orthonormal bases, principal angles
// and the coordinate changes the attacks are built on.
//
// Matrices follow the PCA-on-columns convention: a d x n data matrix holds
// one sample per column, and the learned subspace is spanned by leading left
// singular vectors.

#include <Eigen/Dense>

#include <vector>

namespace subattack {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultTieTol = 1e-9;
inline constexpr double kOrthogonalityTol = 1e-10;

/// A finite, non-empty d x n matrix whose columns are samples.
class DataMatrix {
 public:
  /// Throws InvalidMatrix on empty or non-finite input.
  explicit DataMatrix(Matrix values);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  const Matrix& values() const { return values_; }

 private:
  Matrix values_;
};

/// Full SVD, x = u * diag(sigma) * v^T, with sigma non-increasing.
///
/// Each left singular vector is sign-normalised so its largest-magnitude
/// entry is positive (the first such entry on ties); the matching right
/// singular vector is flipped along with it. Columns of u or v past
/// min(d, n) are normalised the same way on their own.
struct SvdTriple {
  Matrix u;
  Vector sigma;
  Matrix v;
  double rank_tol = kDefaultRankTol;

  Index rows() const { return u.rows(); }
  Index cols() const { return v.rows(); }
  /// Count of sigma_i > rank_tol * sigma_1.
  Index rank() const;
  /// 0-based singular value, or 0 for indices past min(d, n).
  double sigma_at(Index i) const;
};

SvdTriple full_svd(const DataMatrix& m, double rank_tol = kDefaultRankTol);

/// d x k matrix with orthonormal columns.
class OrthonormalBasis {
 public:
  /// Throws InvalidMatrix unless columns^T columns = I within 1e-10, and
  /// InvalidDimension when k > d or k == 0.
  explicit OrthonormalBasis(Matrix columns, bool ambiguous = false);

  Index ambient_dim() const { return columns_.rows(); }
  Index dim() const { return columns_.cols(); }
  const Matrix& columns() const { return columns_; }
  /// Set when the k-th and (k+1)-th singular values tie, so the leading
  /// subspace of the source matrix is not uniquely defined.
  bool ambiguous() const { return ambiguous_; }

 private:
  Matrix columns_;
  bool ambiguous_;
};

struct PrincipalAngles {
  /// Non-decreasing, each in [0, pi/2].
  std::vector<double> angles;

  double largest() const { return angles.empty() ? 0.0 : angles.back(); }
};

/// First k left singular vectors, flagged ambiguous when
/// |sigma_k - sigma_{k+1}| <= tie_tol * sigma_1.
OrthonormalBasis leading_subspace(const DataMatrix& m, Index k, double tie_tol = kDefaultTieTol);
OrthonormalBasis leading_subspace(const SvdTriple& svd, Index k, double tie_tol = kDefaultTieTol);

PrincipalAngles principal_angles(const OrthonormalBasis& a, const OrthonormalBasis& b);

/// Largest principal angle.
double asimov_distance(const OrthonormalBasis& a, const OrthonormalBasis& b);

/// Asimov distance between g_k(original) and g_k(perturbed).
double subspace_shift(const Matrix& original, const Matrix& perturbed, Index k);

/// Canonical (k+1)-dimensional form of a rank-one perturbation of a rank-k
/// matrix: a and b are rotated into singular coordinates and their tails
/// beyond coordinate k are folded onto one coordinate each by a Householder
/// reflection.
struct CompressedRankOne {
  Matrix sigma_tilde;  // (k+1) x (k+1), diag(sigma_1..sigma_k, 0)
  Vector a;            // k+1
  Vector b;            // k+1
};

/// Throws RankMismatch when the numerical rank of x is not k.
CompressedRankOne compress_rank_one_problem(const DataMatrix& x, Index k, const Vector& a,
                                            const Vector& b);

/// Householder reflector H = I - 2 w w^T / (w^T w) with H v = s ||v|| e_1,
/// where s = sign(v_0) (+1 for v_0 == 0). Returns the identity when v is
/// already aligned with e_1.
Matrix householder_to_first_axis(const Vector& v);

/// p * x * t^T. Throws InvalidMatrix when p or t is not orthogonal within 1e-10.
DataMatrix unitary_conjugate(const DataMatrix& x, const Matrix& p, const Matrix& t);

bool is_orthogonal(const Matrix& q, double tol = kOrthogonalityTol);

}  // namespace subattack
