#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace qflow {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kDefaultRankTolerance = 1e-10;

struct SvdResult {
  ComplexMatrix left_vectors;           // rows x k, orthonormal columns
  RealVector singular_values;           // k = min(rows, cols), non-increasing
  ComplexMatrix right_vectors_adjoint;  // k x cols, orthonormal rows
};

// Thin SVD. Throws NumericalFailure on non-convergence or non-finite input.
SvdResult svd(const ComplexMatrix& m);
RealVector singular_values(const ComplexMatrix& m);

// Count of values > rel_tol * max. Input must be sorted non-increasing.
Index numerical_rank(const RealVector& values, double rel_tol = kDefaultRankTolerance);

ComplexMatrix matrix_exponential(const ComplexMatrix& a);

// Tr[a^dag b]
Complex frobenius_product(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

bool all_finite(const ComplexMatrix& m);

// Relative Frobenius distance |a - b| / max(|b|, tiny).
double relative_error(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qflow
