#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace nitsche {

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// Square sparse matrix in compressed-row form, columns sorted within each row.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  /// Sums duplicates; drops entries that sum to exactly zero except on the diagonal.
  static CsrMatrix from_triplets(std::size_t n, std::span<const Triplet> entries);
  static CsrMatrix identity(std::size_t n);

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] std::size_t nnz() const { return values_.size(); }
  [[nodiscard]] std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  [[nodiscard]] std::span<const std::size_t> columns() const { return columns_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  /// Stored value, or zero when (i, j) is not in the pattern.
  [[nodiscard]] double at(std::size_t i, std::size_t j) const;
  [[nodiscard]] std::vector<double> diagonal() const;
  [[nodiscard]] double max_abs() const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  [[nodiscard]] std::vector<double> operator*(std::span<const double> x) const;

  [[nodiscard]] Eigen::MatrixXd to_dense() const;
  /// Principal submatrix on the given (sorted) index set.
  [[nodiscard]] CsrMatrix principal_submatrix(std::span<const std::size_t> keep) const;
  /// max |M_ij - M_ji| over the stored pattern; infinity if the pattern is not symmetric.
  [[nodiscard]] double asymmetry() const;
  [[nodiscard]] bool same_pattern(const CsrMatrix& other) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> columns_;
  std::vector<double> values_;
};

struct GlobalSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
};

/// D^{-1/2} M D^{-1/2}; nullopt if some diagonal entry is not positive.
std::optional<CsrMatrix> jacobi_scale(const CsrMatrix& m);

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, std::size_t iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  [[nodiscard]] double residual() const { return residual_; }
  [[nodiscard]] std::size_t iterations() const { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

struct CgOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 10000;
  bool jacobi_preconditioner = true;
};

struct CgResult {
  std::vector<double> solution;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Preconditioned conjugate gradients. Throws SolverError on non-convergence
/// or when a non-positive curvature p^T M p is met (M not SPD).
CgResult cg_solve(const CsrMatrix& m, std::span<const double> b, const CgOptions& options = {});

/// Dense LU solve, for small or indefinite systems.
std::vector<double> dense_solve(const CsrMatrix& m, std::span<const double> b);

/// Ascending eigenvalues of a dense symmetric matrix.
std::vector<double> sym_eigenvalues(const Eigen::MatrixXd& m);

struct SpectralReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// Empty when the scaled matrix is not positive definite.
  std::optional<double> cond;

  [[nodiscard]] bool unstable() const { return !cond.has_value(); }
};

/// Relative threshold below which lambda_min counts as non-positive.
inline constexpr double kUnstableThreshold = 1e-12;

/// Spectral condition number of the Jacobi-scaled matrix.
SpectralReport condition_number(const CsrMatrix& m);

}  // namespace nitsche
