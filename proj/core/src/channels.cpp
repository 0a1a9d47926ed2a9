#include "qflow/channels.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qflow/errors.hpp"

namespace qflow {
namespace {

Index ipow(Index base, int e) {
  Index r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void check_dims(int site_dim, int arity) {
  if (site_dim < 2) throw InvalidArgument("site dimension must be >= 2");
  if (arity != 1 && arity != 2) throw InvalidArgument("arity must be 1 or 2");
}

}  // namespace

double trace_preservation_error(const std::vector<ComplexMatrix>& kraus_ops) {
  if (kraus_ops.empty()) return std::numeric_limits<double>::infinity();
  const Index n = kraus_ops.front().cols();
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (const auto& k : kraus_ops) s.noalias() += k.adjoint() * k;
  return (s - ComplexMatrix::Identity(n, n)).norm();
}

KrausChannel::KrausChannel(int site_dim, int arity, std::vector<ComplexMatrix> kraus_ops, double tp_tol)
    : site_dim_(site_dim), arity_(arity), dim_(0), ops_(std::move(kraus_ops)) {
  check_dims(site_dim, arity);
  dim_ = ipow(site_dim, arity);
  if (ops_.empty()) throw InvalidArgument("KrausChannel: at least one Kraus operator required");
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (ops_[i].rows() != dim_ || ops_[i].cols() != dim_) {
      throw InvalidArgument("KrausChannel: Kraus operator " + std::to_string(i) + " is not " +
                            std::to_string(dim_) + "x" + std::to_string(dim_));
    }
    if (!all_finite(ops_[i])) throw InvalidArgument("KrausChannel: non-finite entry");
  }
  const double err = trace_preservation_error(ops_);
  if (!(err <= tp_tol)) {
    throw InvalidArgument("KrausChannel: not trace preserving, |sum K^dag K - 1| = " + std::to_string(err));
  }
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw InvalidArgument("KrausChannel::apply: shape mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& k : ops_) out.noalias() += k * rho * k.adjoint();
  return out;
}

Superoperator::Superoperator(int site_dim, int arity, ComplexMatrix matrix, Ordering ordering)
    : site_dim_(site_dim), arity_(arity), matrix_(std::move(matrix)), ordering_(ordering) {
  check_dims(site_dim, arity);
  const Index n = ipow(Index(site_dim) * site_dim, arity);
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw InvalidArgument("Superoperator: matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!all_finite(matrix_)) throw InvalidArgument("Superoperator: non-finite entry");
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) throw InvalidArgument("vectorize: non-square input");
  const Index d = rho.rows();
  ComplexVector v(d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) v[i * d + j] = rho(i, j);
  return v;
}

ComplexMatrix unvectorize(const ComplexVector& v) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw InvalidArgument("unvectorize: length is not a perfect square");
  ComplexMatrix rho(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) rho(i, j) = v[i * d + j];
  return rho;
}

ComplexVector vectorized_identity(Index dim) {
  return vectorize(ComplexMatrix::Identity(dim, dim));
}

Superoperator channel_to_superop(const KrausChannel& ch) {
  const Index n = ch.dim();
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& k : ch.kraus_ops()) s += kron(k, k.conjugate());
  return Superoperator(ch.site_dim(), ch.arity(), std::move(s), Ordering::system_major);
}

ComplexMatrix swap_middle_factors(const ComplexMatrix& m, int site_dim) {
  const Index d = site_dim;
  const Index n = d * d * d * d;
  if (m.rows() != n || m.cols() != n) throw InvalidArgument("swap_middle_factors: expected (d^2)^2 square matrix");
  // index (a,b,c,e) with digits base d; the middle two swap
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      for (Index c = 0; c < d; ++c)
        for (Index e = 0; e < d; ++e) perm[((a * d + b) * d + c) * d + e] = ((a * d + c) * d + b) * d + e;
  ComplexMatrix out(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) out(perm[i], perm[j]) = m(i, j);
  return out;
}

Superoperator site_major_reorder(const Superoperator& w) {
  if (w.arity() != 2) throw InvalidArgument("site_major_reorder: arity-2 superoperator required");
  if (w.ordering() != Ordering::system_major) throw InvalidArgument("site_major_reorder: input already site-major");
  return Superoperator(w.site_dim(), 2, swap_middle_factors(w.matrix(), w.site_dim()), Ordering::site_major);
}

ComplexMatrix liouvillian_generator(const Liouvillian& l) {
  check_dims(l.site_dim, l.arity);
  if (!(l.tau > 0.0)) throw InvalidArgument("Liouvillian: tau must be positive");
  const Index n = ipow(l.site_dim, l.arity);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix gen = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& j : l.jump_ops) {
    if (j.rows() != n || j.cols() != n) throw InvalidArgument("Liouvillian: jump operator has wrong shape");
    const ComplexMatrix jj = j.adjoint() * j;
    gen += kron(j, j.conjugate()) - 0.5 * kron(jj, id) - 0.5 * kron(id, jj.transpose());
  }
  return gen;
}

Superoperator liouvillian_superop(const Liouvillian& l) {
  ComplexMatrix gen = liouvillian_generator(l);
  return Superoperator(l.site_dim, l.arity, matrix_exponential(l.tau * gen), Ordering::system_major);
}

namespace {

ComplexMatrix ginibre(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

// Orthonormal columns with the QR phase ambiguity removed.
ComplexMatrix isometry_from(const ComplexMatrix& g) {
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(g.rows(), g.cols());
  const ComplexMatrix r = qr.matrixQR().topRows(g.cols()).triangularView<Eigen::Upper>();
  for (Index k = 0; k < g.cols(); ++k) {
    const Complex rkk = r(k, k);
    const double a = std::abs(rkk);
    if (a > 0) q.col(k) *= rkk / a;
  }
  return q;
}

}  // namespace

ComplexMatrix random_unitary(std::uint64_t seed, Index n) {
  std::mt19937_64 rng(seed);
  return isometry_from(ginibre(rng, n, n));
}

KrausChannel random_channel(std::uint64_t seed, int d, int arity, int n_kraus) {
  check_dims(d, arity);
  if (n_kraus < 1) throw InvalidArgument("random_channel: n_kraus must be >= 1");
  const Index n = ipow(d, arity);
  std::mt19937_64 rng(seed);
  const ComplexMatrix iso = isometry_from(ginibre(rng, n * n_kraus, n));
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(n_kraus));
  for (int k = 0; k < n_kraus; ++k) ops.push_back(iso.middleRows(k * n, n));
  return KrausChannel(d, arity, std::move(ops));
}

ComplexMatrix conjugation_superop(const ComplexMatrix& u) { return kron(u, u.conjugate()); }

ComplexMatrix swap_superop(int site_dim) {
  const Index d2 = Index(site_dim) * site_dim;
  ComplexMatrix s = ComplexMatrix::Zero(d2 * d2, d2 * d2);
  for (Index a = 0; a < d2; ++a)
    for (Index b = 0; b < d2; ++b) s(b * d2 + a, a * d2 + b) = 1.0;
  return s;
}

double superop_trace_error(const Superoperator& s) {
  const Index n = ipow(s.site_dim(), s.arity());
  ComplexVector one;
  if (s.arity() == 1 || s.ordering() == Ordering::system_major) {
    one = vectorized_identity(n);
  } else {
    const ComplexVector o1 = vectorized_identity(s.site_dim());
    one = kron(o1, o1);
  }
  return (one.transpose() * s.matrix() - one.transpose()).norm();
}

}  // namespace qflow
