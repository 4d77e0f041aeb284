#include "nitsche/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace nitsche {

CsrMatrix CsrMatrix::from_triplets(std::size_t n, std::span<const Triplet> entries) {
  for (const auto& e : entries) {
    if (e.row >= n || e.col >= n) throw std::out_of_range("CsrMatrix::from_triplets: index out of range");
  }
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Stable sort keeps the summation order of duplicates fixed.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(entries[a].row, entries[a].col) < std::pair(entries[b].row, entries[b].col);
  });

  CsrMatrix m;
  m.n_ = n;
  m.row_offsets_.assign(n + 1, 0);
  std::size_t k = 0;
  while (k < order.size()) {
    const auto& first = entries[order[k]];
    double sum = 0.0;
    std::size_t end = k;
    while (end < order.size() && entries[order[end]].row == first.row &&
           entries[order[end]].col == first.col) {
      sum += entries[order[end]].value;
      ++end;
    }
    if (sum != 0.0 || first.row == first.col) {
      m.columns_.push_back(first.col);
      m.values_.push_back(sum);
      ++m.row_offsets_[first.row + 1];
    }
    k = end;
  }
  std::partial_sum(m.row_offsets_.begin(), m.row_offsets_.end(), m.row_offsets_.begin());
  return m;
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, t);
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  auto begin = columns_.begin() + std::ptrdiff_t(row_offsets_[i]);
  auto end = columns_.begin() + std::ptrdiff_t(row_offsets_[i + 1]);
  auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[std::size_t(it - columns_.begin())];
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("CsrMatrix::multiply: size mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) s += values_[k] * x[columns_[k]];
    y[i] = s;
  }
}

std::vector<double> CsrMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(Eigen::Index(n_), Eigen::Index(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      d(Eigen::Index(i), Eigen::Index(columns_[k])) = values_[k];
  return d;
}

CsrMatrix CsrMatrix::principal_submatrix(std::span<const std::size_t> keep) const {
  constexpr auto none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> map(n_, none);
  for (std::size_t k = 0; k < keep.size(); ++k) map[keep[k]] = k;
  std::vector<Triplet> t;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    std::size_t i = keep[k];
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      if (map[columns_[p]] != none) t.push_back({k, map[columns_[p]], values_[p]});
    }
  }
  return from_triplets(keep.size(), t);
}

double CsrMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      std::size_t j = columns_[k];
      auto begin = columns_.begin() + std::ptrdiff_t(row_offsets_[j]);
      auto end = columns_.begin() + std::ptrdiff_t(row_offsets_[j + 1]);
      auto it = std::lower_bound(begin, end, i);
      if (it == end || *it != i) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, std::abs(values_[k] - values_[std::size_t(it - columns_.begin())]));
    }
  }
  return worst;
}

bool CsrMatrix::same_pattern(const CsrMatrix& other) const {
  return n_ == other.n_ && row_offsets_ == other.row_offsets_ && columns_ == other.columns_;
}

std::optional<CsrMatrix> jacobi_scale(const CsrMatrix& m) {
  auto d = m.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) return std::nullopt;
  }
  std::vector<Triplet> t;
  t.reserve(m.nnz());
  auto offsets = m.row_offsets();
  auto cols = m.columns();
  auto vals = m.values();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      // sqrt(d_i d_j) is symmetric in i, j, so the result is exactly symmetric.
      double v = i == cols[k] ? 1.0 : vals[k] / std::sqrt(d[i] * d[cols[k]]);
      t.push_back({i, cols[k], v});
    }
  }
  return CsrMatrix::from_triplets(m.size(), t);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

CgResult cg_solve(const CsrMatrix& m, std::span<const double> b, const CgOptions& options) {
  const std::size_t n = m.size();
  if (b.size() != n) throw std::invalid_argument("cg_solve: size mismatch");

  CgResult result;
  result.solution.assign(n, 0.0);
  double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) return result;

  std::vector<double> inv_diag(n, 1.0);
  if (options.jacobi_preconditioner) {
    auto d = m.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(d[i] > 0.0)) throw SolverError("cg_solve: non-positive diagonal entry", 1.0, 0);
      inv_diag[i] = 1.0 / d[i];
    }
  }

  auto& x = result.solution;
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n), q(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  double rel = 1.0;

  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    m.multiply(p, q);
    double curvature = dot(p, q);
    if (!(curvature > 0.0)) {
      throw SolverError("cg_solve: non-positive curvature, matrix is not positive definite", rel,
                        it);
    }
    double alpha = rz / curvature;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rel = std::sqrt(dot(r, r)) / bnorm;
    if (rel <= options.tolerance) {
      // Confirm with the true residual; the recursive one drifts.
      auto mx = m * std::span<const double>(x);
      double true_res = 0.0;
      for (std::size_t i = 0; i < n; ++i) true_res += (b[i] - mx[i]) * (b[i] - mx[i]);
      rel = std::sqrt(true_res) / bnorm;
      if (rel <= options.tolerance) {
        result.iterations = it;
        result.relative_residual = rel;
        return result;
      }
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - mx[i];
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    double rz_next = dot(r, z);
    double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("cg_solve: no convergence after " + std::to_string(options.max_iterations) +
                        " iterations",
                    rel, options.max_iterations);
}

std::vector<double> dense_solve(const CsrMatrix& m, std::span<const double> b) {
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), Eigen::Index(b.size()));
  Eigen::VectorXd x = m.to_dense().partialPivLu().solve(rhs);
  return {x.data(), x.data() + x.size()};
}

std::vector<double> sym_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eigenvalues: matrix not square");
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("sym_eigenvalues: no convergence");
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

SpectralReport condition_number(const CsrMatrix& m) {
  SpectralReport report;
  auto scaled = jacobi_scale(m);
  if (!scaled) {
    // Non-positive diagonal: cannot be positive definite.
    report.lambda_min = std::numeric_limits<double>::quiet_NaN();
    report.lambda_max = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  Eigen::MatrixXd dense = scaled->to_dense();
  // Symmetrize away round-off before the symmetric solver reads one triangle.
  dense = 0.5 * (dense + dense.transpose()).eval();
  auto ev = sym_eigenvalues(dense);
  report.lambda_min = ev.front();
  report.lambda_max = ev.back();
  if (report.lambda_min > kUnstableThreshold * report.lambda_max) {
    report.cond = report.lambda_max / report.lambda_min;
  }
  return report;
}

}  // namespace nitsche
