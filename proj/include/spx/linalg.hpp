#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "spx/error.hpp"

namespace spx {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kRidgeLambda = 1e-8;
inline constexpr double kMinReciprocalCondition = 1e-12;

template <typename Scalar>
struct LeastSquaresSolution {
  Vector<Scalar> coefficients;
  bool regularized = false;
};

/// Solves the symmetric positive semi-definite system `gram * x = rhs`.
/// Falls back to a ridge term scaled by the mean diagonal when the system is
/// rank deficient or ill-conditioned; throws SingularSystem if that fails too.
template <typename Scalar>
LeastSquaresSolution<Scalar> solve_normal_equations(const Matrix<Scalar>& gram,
                                                    const Vector<Scalar>& rhs) {
  LeastSquaresSolution<Scalar> out;
  if (gram.rows() == 0) {
    out.coefficients.resize(0);
    return out;
  }
  Eigen::LDLT<Matrix<Scalar>> ldlt(gram);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
      ldlt.rcond() > Scalar(kMinReciprocalCondition)) {
    out.coefficients = ldlt.solve(rhs);
    if (out.coefficients.allFinite()) return out;
  }

  const Scalar scale = std::max(gram.diagonal().mean(), Scalar(1e-300));
  Matrix<Scalar> ridged = gram;
  ridged.diagonal().array() += Scalar(kRidgeLambda) * scale;
  Eigen::LDLT<Matrix<Scalar>> fallback(ridged);
  if (fallback.info() != Eigen::Success) {
    fail(ErrorCode::SingularSystem, "normal equations are singular after ridge fallback");
  }
  out.coefficients = fallback.solve(rhs);
  if (!out.coefficients.allFinite()) {
    fail(ErrorCode::SingularSystem, "normal equations are singular after ridge fallback");
  }
  out.regularized = true;
  return out;
}

/// argmin_x sum_j w_j (y_j - X_j x)^2
template <typename Scalar>
LeastSquaresSolution<Scalar> weighted_least_squares(const Matrix<Scalar>& design,
                                                    const Vector<Scalar>& target,
                                                    const Vector<Scalar>& weights) {
  const Matrix<Scalar> weighted = design.transpose() * weights.asDiagonal();
  return solve_normal_equations<Scalar>(weighted * design, weighted * target);
}

/// Unweighted least squares via column-pivoting QR; ridge fallback when the
/// design is rank deficient.
template <typename Scalar>
LeastSquaresSolution<Scalar> ordinary_least_squares(const Matrix<Scalar>& design,
                                                    const Vector<Scalar>& target) {
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(design);
  qr.setThreshold(Scalar(kMinReciprocalCondition));
  if (qr.rank() == design.cols()) {
    LeastSquaresSolution<Scalar> out;
    out.coefficients = qr.solve(target);
    if (out.coefficients.allFinite()) return out;
  }
  const Matrix<Scalar> gram = design.transpose() * design;
  const Scalar scale = std::max(gram.diagonal().mean(), Scalar(1e-300));
  Matrix<Scalar> ridged = gram;
  ridged.diagonal().array() += Scalar(kRidgeLambda) * scale;
  Eigen::LDLT<Matrix<Scalar>> fallback(ridged);
  LeastSquaresSolution<Scalar> out;
  out.coefficients = fallback.solve(design.transpose() * target);
  if (fallback.info() != Eigen::Success || !out.coefficients.allFinite()) {
    fail(ErrorCode::SingularSystem, "design matrix is singular after ridge fallback");
  }
  out.regularized = true;
  return out;
}

}  // namespace spx
