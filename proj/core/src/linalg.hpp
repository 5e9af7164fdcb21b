#pragma once

#include <vector>

namespace gclab::detail {

using Matrix = std::vector<std::vector<double>>;

/// Systems at or below this size are solved by LU; larger ones by iteration.
inline constexpr std::size_t kDirectSolveLimit = 200;
inline constexpr double kIterationTolerance = 1e-12;

/// Solves x = b + diag(c) M x. Requires max c < 1 or a transient M.
std::vector<double> solve_right(const Matrix& M, const std::vector<double>& c,
                                const std::vector<double>& b);

/// Solves x = y + gamma M^T x, i.e. x^T (I - gamma M) = y^T.
std::vector<double> solve_left(const Matrix& M, double gamma, const std::vector<double>& y);

/// Dense solve A x = b by partial-pivot LU.
std::vector<double> solve_dense(const Matrix& A, const std::vector<double>& b);

/// Dense inverse by partial-pivot LU.
Matrix inverse(const Matrix& A);

Matrix multiply(const Matrix& A, const Matrix& B);

/// y^T M
std::vector<double> left_multiply(const std::vector<double>& y, const Matrix& M);

/// M x
std::vector<double> right_multiply(const Matrix& M, const std::vector<double>& x);

/// Cesaro limit of M^t, computed by repeated squaring of the lazy chain (I + M) / 2.
Matrix cesaro_limit(const Matrix& M);

}  // namespace gclab::detail
