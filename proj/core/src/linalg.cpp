#include "qflow/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qflow/errors.hpp"

namespace qflow {

bool all_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const Complex z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

SvdResult svd(const ComplexMatrix& m) {
  if (m.size() == 0) throw InvalidArgument("svd: empty matrix");
  if (!all_finite(m)) throw NumericalFailure("svd: non-finite input");
  SvdResult out;
  // Jacobi is the more accurate choice on the small matrices that dominate here.
  if (std::min(m.rows(), m.cols()) <= 64) {
    Eigen::JacobiSVD<ComplexMatrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) throw NumericalFailure("svd: Jacobi sweep did not converge");
    out.left_vectors = dec.matrixU();
    out.singular_values = dec.singularValues();
    out.right_vectors_adjoint = dec.matrixV().adjoint();
  } else {
    Eigen::BDCSVD<ComplexMatrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) throw NumericalFailure("svd: divide-and-conquer did not converge");
    out.left_vectors = dec.matrixU();
    out.singular_values = dec.singularValues();
    out.right_vectors_adjoint = dec.matrixV().adjoint();
  }
  if (!all_finite(out.left_vectors) || !out.singular_values.allFinite() ||
      !all_finite(out.right_vectors_adjoint)) {
    throw NumericalFailure("svd: non-finite factors");
  }
  return out;
}

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) throw InvalidArgument("singular_values: empty matrix");
  if (!all_finite(m)) throw NumericalFailure("singular_values: non-finite input");
  if (std::min(m.rows(), m.cols()) <= 64) {
    Eigen::JacobiSVD<ComplexMatrix> dec(m);
    if (dec.info() != Eigen::Success) throw NumericalFailure("singular_values: no convergence");
    return dec.singularValues();
  }
  Eigen::BDCSVD<ComplexMatrix> dec(m);
  if (dec.info() != Eigen::Success) throw NumericalFailure("singular_values: no convergence");
  return dec.singularValues();
}

Index numerical_rank(const RealVector& values, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidArgument("numerical_rank: rel_tol must lie in (0,1)");
  if (values.size() == 0) return 0;
  const double top = values.maxCoeff();
  if (top <= 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < values.size(); ++i) {
    if (values[i] > rel_tol * top) ++r;
  }
  return r;
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("matrix_exponential: non-square input");
  if (!all_finite(a)) throw NumericalFailure("matrix_exponential: non-finite input");
  ComplexMatrix e = a.exp();
  if (!all_finite(e)) throw NumericalFailure("matrix_exponential: overflow");
  return e;
}

Complex frobenius_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("frobenius_product: shape mismatch");
  }
  return (a.conjugate().cwiseProduct(b)).sum();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

double relative_error(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double denom = std::max(b.norm(), 1e-300);
  return (a - b).norm() / denom;
}

}  // namespace qflow
