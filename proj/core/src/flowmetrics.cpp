#include "qflow/flowmetrics.hpp"

#include <cmath>
#include <string>

#include "qflow/errors.hpp"

namespace qflow {

SigmaOperator::SigmaOperator(ComplexMatrix m) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.size() == 0) throw InvalidArgument("SigmaOperator: square matrix required");
  if (!all_finite(matrix_)) throw InvalidArgument("SigmaOperator: non-finite entry");
  if ((matrix_ - matrix_.adjoint()).norm() > 1e-10) throw InvalidArgument("SigmaOperator: not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0, 0.0)) > 1e-10) throw InvalidArgument("SigmaOperator: trace is not 1");
  const ComplexMatrix h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalFailure("SigmaOperator: eigensolver failed");
  eigenvalues_ = eig.eigenvalues().reverse();
  if (eigenvalues_.minCoeff() < -1e-10) throw InvalidArgument("SigmaOperator: not positive semidefinite");
  eigenvalues_ = eigenvalues_.cwiseMax(0.0);
}

SigmaOperator gram(const ComplexMatrix& m_part) {
  const ComplexMatrix g = m_part.adjoint() * m_part;
  const double tr = g.trace().real();
  if (!(tr > 0.0)) throw InvalidArgument("gram: zero matrix");
  return SigmaOperator(g / tr);
}

double renyi(const SigmaOperator& sigma, int alpha, double rank_tol) {
  const RealVector& ev = sigma.eigenvalues();
  if (alpha == 0) return std::log2(static_cast<double>(numerical_rank(ev, rank_tol)));
  if (alpha == 2) return -std::log2(ev.squaredNorm());
  throw InvalidArgument("renyi: alpha must be 0 or 2");
}

namespace {

Index rank_of(const ComplexMatrix& m, double tol) {
  const Index r = numerical_rank(singular_values(m), tol);
  if (r == 0) throw InvalidArgument("rank_ratio_index: zero matricization");
  return r;
}

std::vector<double> to_std(const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

double rank_ratio_index(const PartitionPair& pair, double rank_tol) {
  const Index rl = rank_of(pair.m_left, rank_tol);
  const Index rr = rank_of(pair.m_right, rank_tol);
  return 0.5 * std::log2(static_cast<double>(rr) / static_cast<double>(rl));
}

CurrentReport information_current(const PartitionPair& pair, double rank_tol) {
  CurrentReport rep;
  const RealVector sl = singular_values(pair.m_left);
  const RealVector sr = singular_values(pair.m_right);
  const ComplexMatrix gl = pair.m_left.adjoint() * pair.m_left;
  const ComplexMatrix gr = pair.m_right.adjoint() * pair.m_right;
  rep.trace_moment1_left = gl.trace().real();
  rep.trace_moment1_right = gr.trace().real();
  if (!(rep.trace_moment1_left > 0.0) || !(rep.trace_moment1_right > 0.0)) {
    throw InvalidArgument("information_current: zero matricization");
  }
  rep.trace_moment2_left = gl.squaredNorm();
  rep.trace_moment2_right = gr.squaredNorm();
  const SigmaOperator sig_l(gl / rep.trace_moment1_left);
  const SigmaOperator sig_r(gr / rep.trace_moment1_right);
  rep.s2_left = renyi(sig_l, 2);
  rep.s2_right = renyi(sig_r, 2);
  rep.current = 0.5 * (rep.s2_right - rep.s2_left);
  rep.current_ratio = 0.5 * std::log2(rep.trace_moment2_left / rep.trace_moment2_right);
  rep.rank_left = numerical_rank(sl, rank_tol);
  rep.rank_right = numerical_rank(sr, rank_tol);
  rep.index = 0.5 * std::log2(static_cast<double>(*rep.rank_right) / static_cast<double>(*rep.rank_left));
  rep.singular_left = to_std(sl);
  rep.singular_right = to_std(sr);
  return rep;
}

CurrentReport evaluate_current(const MpoTensor& m, const EvaluateOptions& options) {
  if (m.matrix_dim() <= options.dense_limit) {
    return information_current(partition(m, options.dense_limit), options.rank_tol);
  }
  const NetworkMoments nm = network_moments(m, options.contraction);
  CurrentReport rep;
  rep.trace_moment1_left = nm.m1_left;
  rep.trace_moment1_right = nm.m1_right;
  rep.trace_moment2_left = nm.m2_left;
  rep.trace_moment2_right = nm.m2_right;
  if (!(nm.m1_left > 0.0) || !(nm.m1_right > 0.0) || !(nm.m2_left > 0.0) || !(nm.m2_right > 0.0)) {
    throw NumericalFailure("evaluate_current: non-positive trace moment");
  }
  rep.s2_left = -std::log2(nm.m2_left / (nm.m1_left * nm.m1_left));
  rep.s2_right = -std::log2(nm.m2_right / (nm.m1_right * nm.m1_right));
  rep.current = 0.5 * (rep.s2_right - rep.s2_left);
  rep.current_ratio = 0.5 * std::log2(nm.m2_left / nm.m2_right);
  return rep;
}

double information_current_fast(const Superoperator& w, const OperatorSvd& svd_of_v) {
  if (w.arity() != 2 || w.ordering() != Ordering::site_major) {
    throw InvalidArgument("information_current_fast: site-major two-site W required");
  }
  const Index ds = Index(w.site_dim()) * w.site_dim();
  const Index chi = svd_of_v.chi;
  const ComplexMatrix g = w.matrix().adjoint() * w.matrix();
  const ComplexMatrix id = ComplexMatrix::Identity(ds, ds);
  const auto& a = svd_of_v.factors_right;
  const auto& b = svd_of_v.factors_left;

  ComplexMatrix gamma = ComplexMatrix::Zero(ds * ds, ds * ds);
  ComplexMatrix delta = ComplexMatrix::Zero(ds * ds, ds * ds);
  std::vector<ComplexMatrix> a1(static_cast<std::size_t>(chi)), b2(static_cast<std::size_t>(chi));
  for (Index k = 0; k < chi; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    a1[ku] = kron(a[ku], id);
    b2[ku] = kron(id, b[ku]);
    gamma += a1[ku].adjoint() * g * a1[ku];
    delta += b2[ku].adjoint() * g * b2[ku];
  }
  // P_bd = (1 (x) B_b^dag) Gamma (1 (x) B_d);  Q_ac = (A_a^dag (x) 1) Delta (A_c (x) 1)
  std::vector<std::vector<ComplexMatrix>> p(static_cast<std::size_t>(chi)), q(static_cast<std::size_t>(chi));
  for (Index i = 0; i < chi; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    p[iu].resize(static_cast<std::size_t>(chi));
    q[iu].resize(static_cast<std::size_t>(chi));
    const ComplexMatrix bg = b2[iu].adjoint() * gamma;
    const ComplexMatrix ad = a1[iu].adjoint() * delta;
    for (Index j = 0; j < chi; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      p[iu][ju] = bg * b2[ju];
      q[iu][ju] = ad * a1[ju];
    }
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) {
      num += (p[i][j].transpose().cwiseProduct(p[j][i])).sum().real();
      den += (q[i][j].transpose().cwiseProduct(q[j][i])).sum().real();
    }
  if (!(num > 0.0) || !(den > 0.0)) throw InvalidArgument("information_current_fast: vanishing moments");
  return 0.5 * std::log2(num / den);
}

std::pair<double, double> first_moment_check(const PartitionPair& pair) {
  return {pair.m_left.squaredNorm(), pair.m_right.squaredNorm()};
}

bool swap_symmetry_check(const Superoperator& v, const Superoperator& w, double tol,
                         const std::optional<ComplexMatrix>& frame) {
  if (v.arity() != 2 || w.arity() != 2 || v.ordering() != Ordering::site_major ||
      w.ordering() != Ordering::site_major) {
    throw InvalidArgument("swap_symmetry_check: site-major two-site superoperators required");
  }
  ComplexMatrix s = swap_superop(v.site_dim());
  if (frame) {
    const ComplexMatrix us = conjugation_superop(*frame);
    s = s * kron(us, us);
  }
  auto symmetric = [&](const ComplexMatrix& x) {
    return (s * x * s.adjoint() - x).norm() <= tol * std::max(1.0, x.norm());
  };
  return symmetric(v.matrix()) && symmetric(w.matrix());
}

Index separability_rank(const Superoperator& w, double rank_tol) {
  if (w.arity() != 2 || w.ordering() != Ordering::site_major) {
    throw InvalidArgument("separability_rank: site-major two-site W required");
  }
  const ComplexMatrix g = w.matrix().adjoint() * w.matrix();
  const ComplexMatrix c = operator_coefficients(g, operator_basis(w.site_dim(), OperatorBasis::matrix_units));
  return numerical_rank(singular_values(c), rank_tol);
}

double trace_moment(const ComplexMatrix& m_part, int k) {
  if (k < 1) throw InvalidArgument("trace_moment: k must be >= 1");
  const ComplexMatrix g = m_part.adjoint() * m_part;
  ComplexMatrix acc = g;
  for (int i = 1; i < k; ++i) acc = acc * g;
  return acc.trace().real();
}

double trace_moment(const MpoTensor& m, Side side, int k, Index dense_limit) {
  if (m.matrix_dim() <= dense_limit) {
    const PartitionPair pp = partition(m, dense_limit);
    return trace_moment(side == Side::left ? pp.m_left : pp.m_right, k);
  }
  return network_trace_moment(m, side, k);
}

std::pair<double, double> unitary_conjugation_check(const TwoSiteRule& rule, const ComplexMatrix& u,
                                                    const SvdOptions& options) {
  const TwoSiteRule conj = conjugate_rule(rule, u);
  const double i0 = evaluate_current(rule_tensor(rule, options)).current;
  const double i1 = evaluate_current(rule_tensor(conj, options)).current;
  return {i0, i1};
}

}  // namespace qflow
