#include "subattack/pcr.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "subattack/error.hpp"
#include "subattack/io.hpp"
#include "subattack/random.hpp"
#include "subattack/rank_one.hpp"
#include "subattack/unconstrained.hpp"

namespace subattack {

namespace {

bool looks_numeric(const std::string& field) {
  if (field.empty()) return false;
  char* end = nullptr;
  std::strtod(field.c_str(), &end);
  return end == field.c_str() + field.size();
}

Matrix select_columns(const Matrix& m, const std::vector<Index>& cols) {
  Matrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = m.col(cols[j]);
  return out;
}

Vector select_entries(const Vector& v, const std::vector<Index>& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out(static_cast<Index>(j)) = v(idx[j]);
  return out;
}

}  // namespace

PcrModel fit_pcr_with_means(const DataMatrix& features, const Vector& targets, Index k,
                            const Vector& means) {
  const Index n = features.cols();
  if (targets.size() != n) {
    throw Error(ErrorKind::InvalidDimension, "targets must have one entry per sample");
  }
  if (means.size() != features.rows()) {
    throw Error(ErrorKind::InvalidDimension, "means must have one entry per feature");
  }
  const DataMatrix centred(features.values().colwise() - means);
  const SvdTriple svd = full_svd(centred);
  if (k < 1 || k > svd.rank()) {
    throw Error(ErrorKind::InvalidDimension, "k=" + std::to_string(k) +
                                                 " outside [1, rank of centred features = " +
                                                 std::to_string(svd.rank()) + "]");
  }
  OrthonormalBasis components = leading_subspace(svd, k);

  Matrix design(n, k + 1);
  design.leftCols(k) = centred.values().transpose() * components.columns();
  design.col(k).setOnes();
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < k + 1) throw Error(ErrorKind::SingularFit, "PCR design matrix is rank deficient");
  const Vector solution = qr.solve(targets);

  PcrModel model{std::move(components), solution.head(k), solution(k), means, 0.0};
  model.r2_train = r_squared(predict(model, features.values()), targets);
  return model;
}

PcrModel fit_pcr(const DataMatrix& features, const Vector& targets, Index k) {
  return fit_pcr_with_means(features, targets, k, features.values().rowwise().mean());
}

Vector predict(const PcrModel& model, const Matrix& features) {
  if (features.rows() != model.feature_means.size()) {
    throw Error(ErrorKind::InvalidDimension, "feature count differs from the fitted model");
  }
  const Matrix scores = model.components.columns().transpose() * (features.colwise() - model.feature_means);
  Vector out = scores.transpose() * model.coefficients;
  out.array() += model.intercept;
  return out;
}

double r_squared(const Vector& predicted, const Vector& actual) {
  if (predicted.size() != actual.size() || actual.size() < 2) {
    throw Error(ErrorKind::InvalidDimension, "r_squared needs two equal-length vectors of size >= 2");
  }
  const double total = (actual.array() - actual.mean()).square().sum();
  if (total == 0.0) throw Error(ErrorKind::UndefinedR2, "targets are constant");
  return 1.0 - (actual - predicted).squaredNorm() / total;
}

std::string_view pcr_strategy_name(PcrStrategy s) {
  return s == PcrStrategy::RankOne ? "rank_one" : "unconstrained";
}

PcrStrategy parse_pcr_strategy(std::string_view name) {
  if (name == "rank_one") return PcrStrategy::RankOne;
  if (name == "unconstrained") return PcrStrategy::Unconstrained;
  throw Error(ErrorKind::ParseError, "strategy must be rank_one or unconstrained, got '" +
                                         std::string(name) + "'");
}

std::vector<double> default_pcr_eta_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(i * 0.05);
  return grid;
}

std::vector<RegressionReport> attack_pcr(const DataMatrix& features, const Vector& targets,
                                         const PcrStudy& study) {
  const Index n = features.cols();
  if (targets.size() != n) {
    throw Error(ErrorKind::InvalidDimension, "targets must have one entry per sample");
  }
  if (!(study.split_fraction > 0.0 && study.split_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "split_fraction must lie in (0, 1)");
  }
  for (std::size_t i = 0; i < study.eta_grid.size(); ++i) {
    if (!(study.eta_grid[i] >= 0.0) || (i > 0 && study.eta_grid[i] < study.eta_grid[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "eta grid must be non-negative and non-decreasing");
    }
  }
  const auto n_train = static_cast<Index>(std::llround(study.split_fraction * static_cast<double>(n)));
  if (n_train < 2 || n - n_train < 2) {
    throw Error(ErrorKind::InvalidDimension, "split leaves fewer than 2 samples on one side");
  }

  Rng rng(study.split_seed);
  const std::vector<Index> perm = random_permutation(rng, n);
  const std::vector<Index> train_idx(perm.begin(), perm.begin() + n_train);
  const std::vector<Index> test_idx(perm.begin() + n_train, perm.end());

  const Matrix x_train = select_columns(features.values(), train_idx);
  const Matrix x_test = select_columns(features.values(), test_idx);
  const Vector y_train = select_entries(targets, train_idx);
  const Vector y_test = select_entries(targets, test_idx);
  const Vector means = x_train.rowwise().mean();
  const DataMatrix centred(x_train.colwise() - means);

  const SvdTriple svd = full_svd(centred);
  const Index k = study.k;
  if (k < 1 || k >= std::min(centred.rows(), centred.cols())) {
    throw Error(ErrorKind::InvalidDimension, "PCR attack needs 1 <= k < min(d, n_train)");
  }
  const double base = svd.sigma_at(k - 1) - svd.sigma_at(k);

  std::vector<RegressionReport> rows;
  for (double ratio : study.eta_grid) {
    const AttackBudget budget(ratio * base);
    Matrix delta;
    if (study.strategy == PcrStrategy::RankOne) {
      const RankOneResult r = attack_rank_one(centred, k, budget);
      delta = r.attack.a * r.attack.b.transpose();
    } else {
      delta = attack_unconstrained(centred, k, budget).perturbation.delta;
    }
    const Matrix attacked = x_train + delta;
    const PcrModel model = fit_pcr_with_means(DataMatrix(attacked), y_train, k, means);

    RegressionReport row;
    row.eta_ratio = ratio;
    row.strategy = study.strategy;
    row.r2_train = model.r2_train;
    row.r2_test = r_squared(predict(model, x_test), y_test);
    rows.push_back(row);
  }
  return rows;
}

FeatureSet synth_collinear(const CollinearSpec& spec, std::uint64_t seed) {
  const auto r = static_cast<Index>(spec.factor_scales.size());
  if (r < 1 || spec.target_weights.size() != spec.factor_scales.size() || r > spec.d || spec.n < 2) {
    throw Error(ErrorKind::InvalidDimension, "collinear spec needs 1 <= factors <= d, matching weights");
  }
  Rng rng(seed);
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, spec.d, r));
  const Matrix loadings = qr.householderQ() * Matrix::Identity(spec.d, r);
  const Matrix unit_factors = gaussian_matrix(rng, r, spec.n);
  Matrix factors = unit_factors;
  Vector weights(r);
  for (Index i = 0; i < r; ++i) {
    factors.row(i) *= spec.factor_scales[static_cast<std::size_t>(i)];
    weights(i) = spec.target_weights[static_cast<std::size_t>(i)];
  }
  Matrix x = loadings * factors + spec.noise * gaussian_matrix(rng, spec.d, spec.n);
  Vector y = unit_factors.transpose() * weights + spec.target_noise * gaussian_vector(rng, spec.n);
  return {DataMatrix(std::move(x)), std::move(y)};
}

FeatureSet load_feature_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (first_content) {
      first_content = false;
      if (!looks_numeric(fields.front())) continue;
    }
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(parse_number(f, "line " + std::to_string(line_no)));
    if (row.size() < 2) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) +
                                             ": need at least one feature and a target");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(rows.front().size()) + " fields, got " +
                                             std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::ParseError, "feature file has no samples");
  const auto n = static_cast<Index>(rows.size());
  const auto d = static_cast<Index>(rows.front().size()) - 1;
  Matrix x(d, n);
  Vector y(n);
  for (Index j = 0; j < n; ++j) {
    const auto& row = rows[static_cast<std::size_t>(j)];
    for (Index i = 0; i < d; ++i) x(i, j) = row[static_cast<std::size_t>(i)];
    y(j) = row.back();
  }
  return {DataMatrix(std::move(x)), std::move(y)};
}

FeatureSet load_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  return load_feature_csv(in);
}

std::string pcr_csv(const std::vector<RegressionReport>& rows) {
  std::ostringstream out;
  out << "eta_ratio,strategy,r2_train,r2_test\n";
  for (const auto& r : rows) {
    out << format_number(r.eta_ratio) << ',' << pcr_strategy_name(r.strategy) << ','
        << format_number(r.r2_train) << ',' << format_number(r.r2_test) << '\n';
  }
  return out.str();
}

}  // namespace subattack
