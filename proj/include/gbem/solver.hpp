#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "gbem/errors.hpp"

namespace gbem {

struct Solution {
  Eigen::VectorXd x;
  double residualNorm = 0.0;  // ||Ax-b||_2 / ||b||_2, recomputed from the original inputs
  std::string method;
};

inline double residual_norm(const Eigen::MatrixXd& A, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& b) {
  const double bn = b.norm();
  return (A * x - b).norm() / (bn > 0.0 ? bn : 1.0);
}

// Dense Cholesky (lower-triangular) for symmetric positive definite systems.
inline Solution cholesky_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n)
    throw ValidationError("cholesky_solve: dimension mismatch");
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double d = A(k, k) - L.row(k).head(k).squaredNorm();
    if (!(d > 0.0))
      throw NumericalError("matrix not positive definite (pivot at row " +
                           std::to_string(k) + ")");
    L(k, k) = std::sqrt(d);
    for (Eigen::Index r = k + 1; r < n; ++r)
      L(r, k) = (A(r, k) - L.row(r).head(k).dot(L.row(k).head(k))) / L(k, k);
  }
  Eigen::VectorXd y(n), x(n);
  for (Eigen::Index i = 0; i < n; ++i)
    y(i) = (b(i) - L.row(i).head(i).dot(y.head(i))) / L(i, i);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = L.col(i).tail(n - i - 1).dot(x.tail(n - i - 1));
    x(i) = (y(i) - s) / L(i, i);
  }
  Solution sol;
  sol.x = std::move(x);
  sol.residualNorm = residual_norm(A, sol.x, b);
  sol.method = "cholesky";
  return sol;
}

// Dense LU with partial pivoting for general square systems.
inline Solution lu_solve(const Eigen::MatrixXd& A0, const Eigen::VectorXd& b0) {
  const Eigen::Index n = A0.rows();
  if (A0.cols() != n || b0.size() != n)
    throw ValidationError("lu_solve: dimension mismatch");
  Eigen::MatrixXd A = A0;
  Eigen::VectorXd b = b0;
  const double scale = n ? A.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    A.col(k).tail(n - k).cwiseAbs().maxCoeff(&p);
    p += k;
    if (p != k) {
      A.row(k).swap(A.row(p));
      std::swap(b(k), b(p));
    }
    if (std::abs(A(k, k)) < 1e-14 * scale)
      throw NumericalError("matrix numerically singular (smallest pivot at row " +
                           std::to_string(k) + ")");
    for (Eigen::Index r = k + 1; r < n; ++r) {
      double f = A(r, k) / A(k, k);
      if (f == 0.0) continue;
      A.row(r).tail(n - k - 1) -= f * A.row(k).tail(n - k - 1);
      b(r) -= f * b(k);
    }
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = A.row(i).tail(n - i - 1).dot(x.tail(n - i - 1));
    x(i) = (b(i) - s) / A(i, i);
  }
  Solution sol;
  sol.x = std::move(x);
  sol.residualNorm = residual_norm(A0, sol.x, b0);
  sol.method = "lu";
  return sol;
}

}  // namespace gbem
