#include "linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gclab/error.hpp"

namespace gclab::detail {
namespace {

Eigen::MatrixXd to_eigen(const Matrix& A) {
  const auto n = static_cast<Eigen::Index>(A.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = A[i][j];
  }
  return out;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

constexpr std::size_t kMaxIterations = 10'000'000;

}  // namespace

std::vector<double> solve_dense(const Matrix& A, const std::vector<double>& b) {
  const auto n = static_cast<Eigen::Index>(A.size());
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) = b[i];
  Eigen::VectorXd x = to_eigen(A).partialPivLu().solve(rhs);
  return std::vector<double>(x.data(), x.data() + n);
}

Matrix inverse(const Matrix& A) {
  const auto n = static_cast<Eigen::Index>(A.size());
  Eigen::MatrixXd inv = to_eigen(A).partialPivLu().inverse();
  Matrix out(A.size(), std::vector<double>(A.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out[i][j] = inv(i, j);
  }
  return out;
}

std::vector<double> solve_right(const Matrix& M, const std::vector<double>& c,
                                const std::vector<double>& b) {
  const std::size_t n = M.size();
  if (n <= kDirectSolveLimit) {
    Matrix A(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) A[i][j] = (i == j ? 1.0 : 0.0) - c[i] * M[i][j];
    }
    return solve_dense(A, b);
  }
  std::vector<double> x = b;
  for (std::size_t it = 0; it < kMaxIterations; ++it) {
    std::vector<double> next = right_multiply(M, x);
    for (std::size_t i = 0; i < n; ++i) next[i] = b[i] + c[i] * next[i];
    const double d = sup_diff(next, x);
    x = std::move(next);
    if (d <= kIterationTolerance) return x;
  }
  throw Error("solve_right: iteration did not converge");
}

std::vector<double> solve_left(const Matrix& M, double gamma, const std::vector<double>& y) {
  const std::size_t n = M.size();
  if (n <= kDirectSolveLimit) {
    Matrix A(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) A[i][j] = (i == j ? 1.0 : 0.0) - gamma * M[j][i];
    }
    return solve_dense(A, y);
  }
  std::vector<double> x = y;
  for (std::size_t it = 0; it < kMaxIterations; ++it) {
    std::vector<double> next = left_multiply(x, M);
    for (std::size_t i = 0; i < n; ++i) next[i] = y[i] + gamma * next[i];
    const double d = sup_diff(next, x);
    x = std::move(next);
    if (d <= kIterationTolerance) return x;
  }
  throw Error("solve_left: iteration did not converge");
}

Matrix multiply(const Matrix& A, const Matrix& B) {
  const std::size_t n = A.size();
  const std::size_t m = B.empty() ? 0 : B[0].size();
  Matrix C(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < B.size(); ++k) {
      const double a = A[i][k];
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) C[i][j] += a * B[k][j];
    }
  }
  return C;
}

std::vector<double> left_multiply(const std::vector<double>& y, const Matrix& M) {
  std::vector<double> out(M.empty() ? 0 : M[0].size(), 0.0);
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (y[i] == 0.0) continue;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += y[i] * M[i][j];
  }
  return out;
}

std::vector<double> right_multiply(const Matrix& M, const std::vector<double>& x) {
  std::vector<double> out(M.size(), 0.0);
  for (std::size_t i = 0; i < M.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += M[i][j] * x[j];
    out[i] = acc;
  }
  return out;
}

Matrix cesaro_limit(const Matrix& M) {
  const std::size_t n = M.size();
  Matrix L(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) L[i][j] = 0.5 * M[i][j] + (i == j ? 0.5 : 0.0);
  }
  for (int k = 0; k < 64; ++k) {
    Matrix next = multiply(L, L);
    for (auto& row : next) {
      double sum = 0.0;
      for (double v : row) sum += v;
      for (double& v : row) v /= sum;
    }
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d = std::max(d, std::fabs(next[i][j] - L[i][j]));
    }
    L = std::move(next);
    if (d <= 1e-14) break;
  }
  return L;
}

}  // namespace gclab::detail
