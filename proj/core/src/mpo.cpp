#include "qflow/mpo.hpp"

#include <cmath>
#include <string>

#include "qflow/errors.hpp"

namespace qflow {
namespace {

Index ipow(Index base, int e) {
  Index r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void require_two_site_site_major(const Superoperator& s, const char* who) {
  if (s.arity() != 2) throw InvalidArgument(std::string(who) + ": arity-2 superoperator required");
  if (s.ordering() != Ordering::site_major) throw InvalidArgument(std::string(who) + ": site-major ordering required");
}

std::vector<ComplexMatrix> hermitian_basis(int d) {
  std::vector<ComplexMatrix> g;
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(i, i) = 1.0;
    g.push_back(e);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      ComplexMatrix s = ComplexMatrix::Zero(d, d);
      s(i, j) = r2;
      s(j, i) = r2;
      g.push_back(s);
      ComplexMatrix a = ComplexMatrix::Zero(d, d);
      a(i, j) = Complex(0.0, r2);
      a(j, i) = Complex(0.0, -r2);
      g.push_back(a);
    }
  return g;
}

std::vector<ComplexMatrix> paulis() {
  std::vector<ComplexMatrix> s(4, ComplexMatrix::Zero(2, 2));
  s[0] << 1, 0, 0, 1;
  s[1] << 0, 1, 1, 0;
  s[2] << 0, Complex(0, -1), Complex(0, 1), 0;
  s[3] << 1, 0, 0, -1;
  return s;
}

}  // namespace

Side opposite(Side s) { return s == Side::left ? Side::right : Side::left; }

std::vector<ComplexMatrix> operator_basis(int site_dim, OperatorBasis kind) {
  if (site_dim < 2) throw InvalidArgument("operator_basis: site dimension must be >= 2");
  const Index ds = Index(site_dim) * site_dim;
  std::vector<ComplexMatrix> out;
  switch (kind) {
    case OperatorBasis::matrix_units:
      for (Index a = 0; a < ds; ++a)
        for (Index b = 0; b < ds; ++b) {
          ComplexMatrix e = ComplexMatrix::Zero(ds, ds);
          e(a, b) = 1.0;
          out.push_back(e);
        }
      break;
    case OperatorBasis::pauli: {
      if (site_dim != 2) throw InvalidArgument("operator_basis: Pauli basis needs d = 2");
      const auto s = paulis();
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) out.push_back(0.5 * kron(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]));
      break;
    }
    case OperatorBasis::hermitian_preserving: {
      const auto g = hermitian_basis(site_dim);
      const double r2 = 1.0 / std::sqrt(2.0);
      const std::size_t n = g.size();
      for (std::size_t p = 0; p < n; ++p) out.push_back(kron(g[p], g[p].conjugate()));
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) {
          const ComplexMatrix pq = kron(g[p], g[q].conjugate());
          const ComplexMatrix qp = kron(g[q], g[p].conjugate());
          out.push_back(r2 * (pq + qp));
          out.push_back(Complex(0.0, r2) * (pq - qp));
        }
      break;
    }
  }
  return out;
}

ComplexMatrix operator_coefficients(const ComplexMatrix& v, const std::vector<ComplexMatrix>& basis) {
  const Index nb = static_cast<Index>(basis.size());
  if (nb == 0) throw InvalidArgument("operator_coefficients: empty basis");
  const Index ds = basis.front().rows();
  if (ds * ds != nb || v.rows() != ds * ds || v.cols() != ds * ds) {
    throw InvalidArgument("operator_coefficients: dimension mismatch");
  }
  // realignment: R[(a1 b1),(a2 b2)] = V[(a1 a2),(b1 b2)]
  ComplexMatrix r(nb, nb);
  for (Index a1 = 0; a1 < ds; ++a1)
    for (Index a2 = 0; a2 < ds; ++a2)
      for (Index b1 = 0; b1 < ds; ++b1)
        for (Index b2 = 0; b2 < ds; ++b2) r(a1 * ds + b1, a2 * ds + b2) = v(a1 * ds + a2, b1 * ds + b2);
  ComplexMatrix t(nb, nb);
  for (Index k = 0; k < nb; ++k)
    for (Index a = 0; a < ds; ++a)
      for (Index b = 0; b < ds; ++b) t(a * ds + b, k) = basis[static_cast<std::size_t>(k)](a, b);
  return t.adjoint() * r * t.conjugate();
}

OperatorSvd operator_svd(const Superoperator& v, const SvdOptions& options) {
  require_two_site_site_major(v, "operator_svd");
  const auto basis = operator_basis(v.site_dim(), options.basis);
  const ComplexMatrix c = operator_coefficients(v.matrix(), basis);
  const Index nb = c.rows();
  const double cn = c.norm();
  if (cn == 0.0) throw InvalidArgument("operator_svd: zero superoperator");

  ComplexMatrix y;
  ComplexMatrix xh;
  RealVector s;
  if (c.imag().norm() <= 1e-13 * cn) {
    Eigen::JacobiSVD<RealMatrix> dec(c.real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (dec.info() != Eigen::Success) throw NumericalFailure("operator_svd: SVD did not converge");
    y = dec.matrixU().cast<Complex>();
    xh = dec.matrixV().transpose().cast<Complex>();
    s = dec.singularValues();
  } else {
    SvdResult dec = svd(c);
    y = std::move(dec.left_vectors);
    xh = std::move(dec.right_vectors_adjoint);
    s = std::move(dec.singular_values);
  }
  const Index chi = numerical_rank(s, options.rank_tol);

  // Flat spectrum: c is proportional to a unitary; fix the gauge to Y = c/s, X = 1.
  bool flat = chi == nb;
  for (Index k = 1; flat && k < chi; ++k) flat = std::abs(s[k] - s[0]) <= 1e-12 * s[0];
  if (flat) {
    y = c / s[0];
    xh = ComplexMatrix::Identity(nb, nb);
  }

  OperatorSvd out;
  out.site_dim = v.site_dim();
  out.chi = chi;
  out.singular_values = s.head(chi);
  const Index ds = basis.front().rows();
  for (Index k = 0; k < chi; ++k) {
    const double w = std::sqrt(s[k]);
    ComplexMatrix b = ComplexMatrix::Zero(ds, ds);
    ComplexMatrix a = ComplexMatrix::Zero(ds, ds);
    for (Index r = 0; r < nb; ++r) {
      b += y(r, k) * basis[static_cast<std::size_t>(r)];
      a += xh(k, r) * basis[static_cast<std::size_t>(r)];
    }
    out.factors_left.push_back(w * b);
    out.factors_right.push_back(w * a);
  }
  return out;
}

OperatorSvd operator_svd_factored(const Superoperator& core, const ComplexMatrix& left_local,
                                  const ComplexMatrix& right_local, const SvdOptions& options) {
  OperatorSvd out = operator_svd(core, options);
  const Index ds = Index(core.site_dim()) * core.site_dim();
  if (left_local.rows() != ds || left_local.cols() != ds || right_local.rows() != ds || right_local.cols() != ds) {
    throw InvalidArgument("operator_svd_factored: local superoperators must be D_s x D_s");
  }
  for (auto& b : out.factors_left) b = b * left_local;
  for (auto& a : out.factors_right) a = a * right_local;
  return out;
}

ComplexMatrix reconstruct(const OperatorSvd& s) {
  const Index ds = Index(s.site_dim) * s.site_dim;
  ComplexMatrix v = ComplexMatrix::Zero(ds * ds, ds * ds);
  for (Index k = 0; k < s.chi; ++k) {
    v += kron(s.factors_left[static_cast<std::size_t>(k)], s.factors_right[static_cast<std::size_t>(k)]);
  }
  return v;
}

MpoTensor::MpoTensor(int site_dim, int cell_sites, DenseTensor cell, int width, int layers)
    : site_dim_(site_dim), cell_sites_(cell_sites), cell_(std::move(cell)), width_(width), layers_(layers) {
  if (site_dim < 2) throw InvalidArgument("MpoTensor: site dimension must be >= 2");
  if (cell_sites < 1 || width < 1 || layers < 1) throw InvalidArgument("MpoTensor: grid sizes must be >= 1");
  if (cell_.rank() != 4) throw InvalidArgument("MpoTensor: cell must have rank 4");
  const Index p = ipow(site_space(), cell_sites);
  if (cell_.dim(2) != p || cell_.dim(3) != p) throw InvalidArgument("MpoTensor: physical dimension mismatch");
  for (const auto& z : cell_.values())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidArgument("MpoTensor: non-finite entry");
}

Index MpoTensor::chi_left() const { return ipow(cell_chi_left(), layers_); }
Index MpoTensor::chi_right() const { return ipow(cell_chi_right(), layers_); }
Index MpoTensor::physical_dim() const { return ipow(site_space(), n_sites()); }

Index MpoTensor::matrix_dim() const {
  // saturating to avoid overflow on absurd grids
  const double v = std::max(std::pow(double(cell_chi_left()), layers_), std::pow(double(cell_chi_right()), layers_)) *
                   std::pow(double(site_space()), n_sites());
  if (v > 4e18) return std::numeric_limits<Index>::max();
  return static_cast<Index>(std::llround(v));
}

namespace {

// cell as [a, b, j_1..j_s, k_1..k_s]
DenseTensor site_resolved_cell(const MpoTensor& m) {
  std::vector<Index> dims{m.cell_chi_left(), m.cell_chi_right()};
  for (int i = 0; i < 2 * m.cell_sites(); ++i) dims.push_back(m.site_space());
  return m.cell().reshaped(dims);
}

}  // namespace

DenseTensor MpoTensor::entries(Index max_matrix_dim) const {
  if (is_elementary()) return cell_;
  if (matrix_dim() > max_matrix_dim) {
    throw ResourceCapExceeded("MpoTensor::entries: dense matricization of dimension " + std::to_string(matrix_dim()) +
                              " exceeds " + std::to_string(max_matrix_dim));
  }
  const DenseTensor t = site_resolved_cell(*this);
  const int s = cell_sites_;
  const int nsites = n_sites();
  int next = 0;
  std::vector<std::vector<int>> hb(static_cast<std::size_t>(layers_), std::vector<int>(static_cast<std::size_t>(width_ + 1)));
  std::vector<std::vector<int>> vert(static_cast<std::size_t>(layers_ + 1), std::vector<int>(static_cast<std::size_t>(nsites)));
  for (auto& row : hb)
    for (auto& l : row) l = next++;
  for (auto& row : vert)
    for (auto& l : row) l = next++;
  std::vector<LabeledTensor> net;
  for (int l = 0; l < layers_; ++l)
    for (int c = 0; c < width_; ++c) {
      std::vector<int> labels{hb[l][c], hb[l][c + 1]};
      for (int i = 0; i < s; ++i) labels.push_back(vert[l][c * s + i]);
      for (int i = 0; i < s; ++i) labels.push_back(vert[l + 1][c * s + i]);
      net.push_back(LabeledTensor{t, labels});
    }
  std::vector<int> out;
  for (int l = 0; l < layers_; ++l) out.push_back(hb[l][0]);
  for (int l = 0; l < layers_; ++l) out.push_back(hb[l][width_]);
  for (int i = 0; i < nsites; ++i) out.push_back(vert[0][i]);
  for (int i = 0; i < nsites; ++i) out.push_back(vert[layers_][i]);
  DenseTensor full = contract_network(std::move(net), out);
  return full.reshaped({chi_left(), chi_right(), physical_dim(), physical_dim()});
}

MpoTensor build_local_tensor(const Superoperator& w, const OperatorSvd& svd_of_v) {
  require_two_site_site_major(w, "build_local_tensor");
  if (w.site_dim() != svd_of_v.site_dim) throw InvalidArgument("build_local_tensor: site dimension mismatch");
  const Index chi = svd_of_v.chi;
  const Index ds = Index(w.site_dim()) * w.site_dim();
  const Index p = ds * ds;
  for (Index k = 0; k < chi; ++k) {
    const auto& a = svd_of_v.factors_right[static_cast<std::size_t>(k)];
    const auto& b = svd_of_v.factors_left[static_cast<std::size_t>(k)];
    if (a.rows() != ds || a.cols() != ds || b.rows() != ds || b.cols() != ds) {
      throw InvalidArgument("build_local_tensor: factor dimension mismatch");
    }
  }
  DenseTensor cell({chi, chi, p, p});
  for (Index al = 0; al < chi; ++al)
    for (Index be = 0; be < chi; ++be) {
      const ComplexMatrix m = w.matrix() * kron(svd_of_v.factors_right[static_cast<std::size_t>(al)],
                                                svd_of_v.factors_left[static_cast<std::size_t>(be)]);
      Complex* dst = cell.data() + (al * chi + be) * p * p;
      for (Index in = 0; in < p; ++in)
        for (Index out = 0; out < p; ++out) dst[in * p + out] = m(out, in);
    }
  return MpoTensor(w.site_dim(), 2, std::move(cell));
}

MpoTensor shift_tensor(int d, Side direction) {
  if (d < 2) throw InvalidArgument("shift_tensor: d must be >= 2");
  const Index ds = Index(d) * d;
  DenseTensor cell({ds, ds, ds, ds});
  for (Index a = 0; a < ds; ++a)
    for (Index b = 0; b < ds; ++b) {
      if (direction == Side::right) {
        cell.at({a, b, b, a}) = 1.0;
      } else {
        cell.at({a, b, a, b}) = 1.0;
      }
    }
  return MpoTensor(d, 1, std::move(cell));
}

MpoTensor mirror_tensor(const MpoTensor& m) {
  if (!m.is_elementary()) throw InvalidArgument("mirror_tensor: elementary tensor required");
  const int s = m.cell_sites();
  const DenseTensor t = site_resolved_cell(m);
  std::vector<int> perm{1, 0};
  for (int i = s - 1; i >= 0; --i) perm.push_back(2 + i);
  for (int i = s - 1; i >= 0; --i) perm.push_back(2 + s + i);
  DenseTensor r = t.permuted(perm).reshaped(m.cell().dims());
  // bond dims swap
  r = r.reshaped({m.cell_chi_right(), m.cell_chi_left(), m.cell().dim(2), m.cell().dim(3)});
  return MpoTensor(m.site_dim(), s, std::move(r));
}

PartitionPair partition(const MpoTensor& m, Index max_matrix_dim) {
  const DenseTensor e = m.entries(max_matrix_dim);
  return PartitionPair{e.permuted({0, 3, 1, 2}).as_matrix(2), e.permuted({0, 2, 1, 3}).as_matrix(2)};
}

DenseTensor unpartition(const ComplexMatrix& part, Side side, Index chi_left, Index chi_right, Index phys) {
  if (part.rows() != chi_left * phys || part.cols() != chi_right * phys) {
    throw InvalidArgument("unpartition: shape mismatch");
  }
  const DenseTensor t = DenseTensor::from_matrix(part, {chi_left, phys, chi_right, phys});
  return side == Side::left ? t.permuted({0, 2, 3, 1}) : t.permuted({0, 2, 1, 3});
}

namespace {

void enforce_cap(const MpoTensor& m, const DimensionCap& cap, const char* who) {
  if (m.matrix_dim() > cap.max_matrix_dim) {
    throw ResourceCapExceeded(std::string(who) + ": matrix dimension " + std::to_string(m.matrix_dim()) +
                              " exceeds cap " + std::to_string(cap.max_matrix_dim));
  }
}

}  // namespace

MpoTensor block(const MpoTensor& m, int n, const DimensionCap& cap) {
  if (n < 1) throw InvalidArgument("block: n must be >= 1");
  if (n == 1) return m;
  MpoTensor out(m.site_dim(), m.cell_sites(), m.cell(), m.width() * n, m.layers());
  enforce_cap(out, cap, "block");
  return out;
}

MpoTensor compose(const MpoTensor& m, int n, const DimensionCap& cap) {
  if (n < 1) throw InvalidArgument("compose: n must be >= 1");
  if (n == 1) return m;
  MpoTensor out(m.site_dim(), m.cell_sites(), m.cell(), m.width() * n, m.layers() * n);
  enforce_cap(out, cap, "compose");
  return out;
}

TwoSiteRule make_two_site_rule(const Superoperator& v, const Superoperator& w) {
  require_two_site_site_major(v, "make_two_site_rule");
  require_two_site_site_major(w, "make_two_site_rule");
  if (v.site_dim() != w.site_dim()) throw InvalidArgument("make_two_site_rule: site dimension mismatch");
  return TwoSiteRule{v, w, std::nullopt};
}

OperatorSvd rule_svd(const TwoSiteRule& rule, const SvdOptions& options) {
  if (rule.v_factors) {
    const auto& f = *rule.v_factors;
    return operator_svd_factored(Superoperator(rule.v.site_dim(), 2, f.core, Ordering::site_major), f.left_local,
                                 f.right_local, options);
  }
  return operator_svd(rule.v, options);
}

MpoTensor rule_tensor(const TwoSiteRule& rule, const SvdOptions& options) {
  return build_local_tensor(rule.w, rule_svd(rule, options));
}

TwoSiteRule mirror_rule(const TwoSiteRule& rule) {
  const int d = rule.v.site_dim();
  const ComplexMatrix s = swap_superop(d);
  TwoSiteRule out{Superoperator(d, 2, s * rule.v.matrix() * s, Ordering::site_major),
                  Superoperator(d, 2, s * rule.w.matrix() * s, Ordering::site_major), std::nullopt};
  if (rule.v_factors) {
    const auto& f = *rule.v_factors;
    out.v_factors = GateFactorization{s * f.core * s, f.right_local, f.left_local};
  }
  return out;
}

TwoSiteRule conjugate_rule(const TwoSiteRule& rule, const ComplexMatrix& u) {
  const int d = rule.v.site_dim();
  if (u.rows() != d || u.cols() != d) throw InvalidArgument("conjugate_rule: u must be d x d");
  if ((u.adjoint() * u - ComplexMatrix::Identity(d, d)).norm() > 1e-10) {
    throw InvalidArgument("conjugate_rule: u is not unitary");
  }
  const ComplexMatrix us = conjugation_superop(u);
  const ComplexMatrix usd = us.adjoint();
  const ComplexMatrix left = kron(usd, usd);
  const ComplexMatrix right = kron(us, us);
  TwoSiteRule out{Superoperator(d, 2, left * rule.v.matrix() * right, Ordering::site_major),
                  Superoperator(d, 2, left * rule.w.matrix() * right, Ordering::site_major), std::nullopt};
  if (rule.v_factors) {
    const auto& f = *rule.v_factors;
    out.v_factors = GateFactorization{left * f.core * right, usd * f.left_local * us, usd * f.right_local * us};
  }
  return out;
}

}  // namespace qflow
