#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "nitsche/linalg.hpp"
#include "oracles.hpp"

using namespace nitsche;

namespace {

CsrMatrix from_dense(const Eigen::MatrixXd& m) {
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) t.push_back({std::size_t(i), std::size_t(j), m(i, j)});
  return CsrMatrix::from_triplets(m.rows(), t);
}

Eigen::MatrixXd random_spd(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1, 1);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = d(rng);
  return a.transpose() * a + Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TEST(Csr, FromTriplets) {
  std::vector<Triplet> t{{0, 1, 2.0}, {0, 1, 3.0}, {1, 1, 0.0}, {1, 0, 0.0}};
  auto m = CsrMatrix::from_triplets(2, t);
  EXPECT_EQ(m.at(0, 1), 5.0);
  EXPECT_EQ(m.at(1, 0), 0.0);
  // Off-diagonal explicit zeros are dropped, the diagonal is kept.
  EXPECT_EQ(m.nnz(), 2u);
  std::vector<Triplet> bad{{2, 0, 1.0}};
  EXPECT_THROW(CsrMatrix::from_triplets(2, bad), std::out_of_range);
  auto empty = CsrMatrix::from_triplets(3, {});
  EXPECT_EQ(empty.nnz(), 0u);
  auto y = empty * std::vector<double>{1, 2, 3};
  EXPECT_EQ(y, (std::vector<double>{0, 0, 0}));
  auto id = CsrMatrix::identity(3);
  EXPECT_EQ((id * std::vector<double>{1, 2, 3}), (std::vector<double>{1, 2, 3}));
}

TEST(Csr, SortedColumnsAndDeterministicLayout) {
  std::vector<Triplet> t{{1, 2, 1.0}, {1, 0, 2.0}, {0, 0, 1.0}, {1, 2, 4.0}};
  auto a = CsrMatrix::from_triplets(3, t);
  std::reverse(t.begin(), t.end());
  auto b = CsrMatrix::from_triplets(3, t);
  EXPECT_TRUE(a.same_pattern(b));
  auto off = a.row_offsets();
  auto cols = a.columns();
  for (std::size_t i = 0; i < 3; ++i)
    for (auto k = off[i] + 1; k < off[i + 1]; ++k) EXPECT_LT(cols[k - 1], cols[k]);
}

TEST(Csr, MatvecAgainstDense) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-1, 1);
  std::bernoulli_distribution keep(0.3);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(40, 40);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j)
      if (keep(rng)) m(i, j) = d(rng);
  auto csr = from_dense(m);
  Eigen::VectorXd x = Eigen::VectorXd::Random(40);
  auto y = csr * std::vector<double>(x.data(), x.data() + 40);
  Eigen::VectorXd ref = m * x;
  for (int i = 0; i < 40; ++i) EXPECT_NEAR(y[i], ref(i), 1e-13);
  EXPECT_TRUE(csr.to_dense().isApprox(m));
}

TEST(JacobiScale, Examples) {
  Eigen::MatrixXd m(2, 2);
  m << 4, 2, 2, 4;
  auto s = jacobi_scale(from_dense(m));
  ASSERT_TRUE(s);
  EXPECT_DOUBLE_EQ(s->at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(s->at(0, 1), 0.5);
  auto diag = jacobi_scale(from_dense(Eigen::Vector3d(2, 5, 9).asDiagonal().toDenseMatrix()));
  EXPECT_TRUE(diag->to_dense().isApprox(Eigen::MatrixXd::Identity(3, 3)));
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 0, 0, -1;
  EXPECT_FALSE(jacobi_scale(from_dense(bad)));
}

TEST(JacobiScale, InvariantUnderScalingAndPreservesInertia) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd m = oracle::random_symmetric(12, rng);
    m.diagonal() = m.diagonal().cwiseAbs().array() + 0.1;
    auto s1 = jacobi_scale(from_dense(m));
    auto s2 = jacobi_scale(from_dense(7.5 * m));
    EXPECT_LT((s1->to_dense() - s2->to_dense()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(s1->asymmetry(), 0.0);
    auto neg = [](const std::vector<double>& ev) {
      return std::count_if(ev.begin(), ev.end(), [](double v) { return v < 0; });
    };
    EXPECT_EQ(neg(oracle::jacobi_eigenvalues(m)), neg(oracle::jacobi_eigenvalues(s1->to_dense())));
  }
}

TEST(Eigenvalues, SmallExamples) {
  auto ev = sym_eigenvalues(Eigen::Vector3d(3, 1, 2).asDiagonal().toDenseMatrix());
  EXPECT_EQ(ev, (std::vector<double>{1, 2, 3}));
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  ev = sym_eigenvalues(swap);
  EXPECT_NEAR(ev[0], -1.0, 1e-15);
  EXPECT_NEAR(ev[1], 1.0, 1e-15);
}

TEST(Eigenvalues, AgainstJacobiOracleTraceAndDeterminant) {
  std::mt19937 rng(17);
  Eigen::MatrixXd m = oracle::random_symmetric(30, rng);
  auto ev = sym_eigenvalues(m);
  auto ref = oracle::jacobi_eigenvalues(m);
  double sum = 0.0, logdet = 0.0;
  int sign = 1;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    EXPECT_NEAR(ev[i], ref[i], 1e-12);
    sum += ev[i];
    logdet += std::log(std::abs(ev[i]));
    if (ev[i] < 0) sign = -sign;
  }
  EXPECT_NEAR(sum, m.trace(), 1e-9 * std::abs(m.trace()) + 1e-12);
  double det = m.determinant();
  EXPECT_EQ(sign, det < 0 ? -1 : 1);
  EXPECT_NEAR(logdet, std::log(std::abs(det)), 1e-9 * std::abs(logdet));
}

TEST(ConditionNumber, IdentityScalingAndUnstable) {
  auto id = condition_number(CsrMatrix::identity(5));
  ASSERT_TRUE(id.cond);
  EXPECT_NEAR(*id.cond, 1.0, 1e-14);
  std::mt19937 rng(9);
  Eigen::MatrixXd spd = random_spd(15, rng);
  auto a = condition_number(from_dense(spd));
  auto b = condition_number(from_dense(1e3 * spd));
  EXPECT_NEAR(*a.cond, *b.cond, 1e-10 * *a.cond);
  Eigen::MatrixXd indef(2, 2);
  indef << 1, 2, 2, 1;
  EXPECT_TRUE(condition_number(from_dense(indef)).unstable());
  Eigen::MatrixXd negdiag(2, 2);
  negdiag << 1, 0, 0, -3;
  EXPECT_TRUE(condition_number(from_dense(negdiag)).unstable());
}

TEST(Cg, IdentityOneIteration) {
  std::vector<double> b{1, -2, 3};
  auto r = cg_solve(CsrMatrix::identity(3), b);
  EXPECT_EQ(r.solution, b);
  EXPECT_LE(r.iterations, 1u);
}

TEST(Cg, RandomSpdAgainstDenseSolve) {
  std::mt19937 rng(21);
  Eigen::MatrixXd m = random_spd(50, rng);
  auto csr = from_dense(m);
  std::vector<double> b(50);
  std::uniform_real_distribution<double> d(-1, 1);
  for (auto& v : b) v = d(rng);
  auto cg = cg_solve(csr, b);
  auto lu = dense_solve(csr, b);
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(cg.solution[i], lu[i], 1e-8);
  auto res = csr * cg.solution;
  double rn = 0, bn = 0;
  for (int i = 0; i < 50; ++i) {
    rn += (res[i] - b[i]) * (res[i] - b[i]);
    bn += b[i] * b[i];
  }
  EXPECT_LE(std::sqrt(rn / bn), 1e-10);
}

TEST(Cg, IndefiniteThrows) {
  Eigen::MatrixXd m(3, 3);
  m << 2, 3, 0, 3, 2, 0, 0, 0, 1;
  try {
    cg_solve(from_dense(m), std::vector<double>{1, -1, 0});
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}
