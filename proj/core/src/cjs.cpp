#include <cmath>
#include <string>

#include "qflow/errors.hpp"
#include "qflow/flowmetrics.hpp"

namespace qflow {
namespace {

const char* side_name(Side s) { return s == Side::left ? "M_L" : "M_R"; }

struct SignedKraus {
  ComplexMatrix k;
  double sign;
};

// Site-major vectorized index (x1 y1 x2 y2 ...) -> system-major (x1 x2 .. y1 y2 ..),
// with an optional leading bond pair (b', b'') treated as one more site.
std::vector<Index> to_system_major(Index bond_dim, int sites, Index d) {
  std::vector<Index> kets{bond_dim};
  for (int i = 0; i < sites; ++i) kets.push_back(d);
  const std::size_t nf = kets.size();
  Index total = 1;
  for (Index k : kets) total *= k * k;
  std::vector<Index> perm(static_cast<std::size_t>(total));
  std::vector<Index> digit(2 * nf);
  for (Index idx = 0; idx < total; ++idx) {
    Index rem = idx;
    for (std::size_t f = nf; f-- > 0;) {
      digit[2 * f + 1] = rem % kets[f];
      rem /= kets[f];
      digit[2 * f] = rem % kets[f];
      rem /= kets[f];
    }
    Index ket = 0, bra = 0;
    for (std::size_t f = 0; f < nf; ++f) {
      ket = ket * kets[f] + digit[2 * f];
      bra = bra * kets[f] + digit[2 * f + 1];
    }
    Index nket = 1;
    for (Index k : kets) nket *= k;
    perm[static_cast<std::size_t>(idx)] = ket * nket + bra;
  }
  return perm;
}

// Choi decomposition of a system-major superoperator s: (no*no) x (ni*ni).
// Returns false when the Choi matrix is not Hermitian within tol.
bool signed_kraus(const ComplexMatrix& s, Index no, Index ni, double tol, std::vector<SignedKraus>& out) {
  ComplexMatrix c(no * ni, no * ni);
  for (Index o1 = 0; o1 < no; ++o1)
    for (Index o2 = 0; o2 < no; ++o2)
      for (Index i1 = 0; i1 < ni; ++i1)
        for (Index i2 = 0; i2 < ni; ++i2) c(o1 * ni + i1, o2 * ni + i2) = s(o1 * no + o2, i1 * ni + i2);
  if ((c - c.adjoint()).norm() > tol) return false;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (c + c.adjoint()));
  if (eig.info() != Eigen::Success) throw NumericalFailure("cjs: eigensolver failed");
  const RealVector& lam = eig.eigenvalues();
  const double top = lam.cwiseAbs().maxCoeff();
  for (Index m = 0; m < lam.size(); ++m) {
    if (std::abs(lam[m]) <= 1e-13 * top) continue;
    ComplexMatrix k(no, ni);
    const double w = std::sqrt(std::abs(lam[m]));
    for (Index o = 0; o < no; ++o)
      for (Index i = 0; i < ni; ++i) k(o, i) = w * eig.eigenvectors()(o * ni + i, m);
    out.push_back(SignedKraus{std::move(k), lam[m] > 0 ? 1.0 : -1.0});
  }
  return true;
}

// Phi = sum_mu s_mu K~ (.) K~^dag with K~ = |alpha><beta| (x) K: bonds embedded diagonally.
struct DiagonalForm {
  Index chi_out = 0, chi_in = 0, n = 0;
  std::vector<std::vector<std::vector<SignedKraus>>> blocks;  // [alpha][beta]
};

// Phi with the bond read as a vectorized (ket, bra) pair.
struct DoubledForm {
  Index n_out = 0, n_in = 0;
  std::vector<SignedKraus> ops;
};

// Superoperator block (alpha, beta) of the chosen matricization, site-major, out x in.
ComplexMatrix block_superop(const DenseTensor& cell, Side side, Index alpha, Index beta) {
  const Index p = cell.dim(2);
  const Index chi_r = cell.dim(1);
  ComplexMatrix s(p, p);
  const Complex* src = cell.data() + (alpha * chi_r + beta) * p * p;
  for (Index j = 0; j < p; ++j)
    for (Index k = 0; k < p; ++k) {
      if (side == Side::left) s(k, j) = src[j * p + k];
      else s(j, k) = src[j * p + k];
    }
  return s;
}

ComplexMatrix permute_both(const ComplexMatrix& s, const std::vector<Index>& perm) {
  ComplexMatrix out(s.rows(), s.cols());
  for (Index j = 0; j < s.cols(); ++j)
    for (Index i = 0; i < s.rows(); ++i) out(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = s(i, j);
  return out;
}

Index ipow(Index b, int e) {
  Index r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_cjs_input(const MpoTensor& m) {
  if (!m.is_elementary()) throw InvalidArgument("cjs: elementary tensor required");
  const Index n = ipow(m.site_dim(), m.cell_sites());
  if (std::max(m.cell_chi_left(), m.cell_chi_right()) * n > 256) {
    throw ResourceCapExceeded("cjs: Choi construction exceeds the size guard");
  }
}

bool diagonal_form(const MpoTensor& m, Side side, DiagonalForm& form) {
  const DenseTensor& cell = m.cell();
  form.chi_out = cell.dim(0);
  form.chi_in = cell.dim(1);
  form.n = ipow(m.site_dim(), m.cell_sites());
  const auto perm = to_system_major(1, m.cell_sites(), m.site_dim());
  const double tol = 1e-10 * std::max(1.0, cell.norm());
  form.blocks.assign(static_cast<std::size_t>(form.chi_out),
                     std::vector<std::vector<SignedKraus>>(static_cast<std::size_t>(form.chi_in)));
  for (Index a = 0; a < form.chi_out; ++a)
    for (Index b = 0; b < form.chi_in; ++b) {
      const ComplexMatrix s = permute_both(block_superop(cell, side, a, b), perm);
      if (!signed_kraus(s, form.n, form.n, tol, form.blocks[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])) {
        return false;
      }
    }
  return true;
}

Index perfect_root(Index x) {
  const auto r = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(x))));
  return r * r == x ? r : -1;
}

bool doubled_form(const MpoTensor& m, Side side, DoubledForm& form) {
  const DenseTensor& cell = m.cell();
  const Index dl = perfect_root(cell.dim(0));
  const Index dr = perfect_root(cell.dim(1));
  if (dl < 0 || dr < 0) return false;
  const Index p = cell.dim(2);
  const Index n = ipow(m.site_dim(), m.cell_sites());
  form.n_out = dl * n;
  form.n_in = dr * n;
  // full superoperator rows (alpha, out-physical), cols (beta, in-physical)
  ComplexMatrix s(cell.dim(0) * p, cell.dim(1) * p);
  for (Index a = 0; a < cell.dim(0); ++a)
    for (Index b = 0; b < cell.dim(1); ++b) s.block(a * p, b * p, p, p) = block_superop(cell, side, a, b);
  const auto po = to_system_major(dl, m.cell_sites(), m.site_dim());
  const auto pi = to_system_major(dr, m.cell_sites(), m.site_dim());
  ComplexMatrix sys(s.rows(), s.cols());
  for (Index j = 0; j < s.cols(); ++j)
    for (Index i = 0; i < s.rows(); ++i) sys(po[static_cast<std::size_t>(i)], pi[static_cast<std::size_t>(j)]) = s(i, j);
  return signed_kraus(sys, form.n_out, form.n_in, 1e-10 * std::max(1.0, cell.norm()), form.ops);
}

// eps(E_ab) = Phi^dag(Phi(E_ab)) as a dense (chi_in n) x (chi_in n) matrix.
ComplexMatrix apply_eps(const DiagonalForm& f, Index a, Index b) {
  const Index n = f.n;
  const Index dim = f.chi_in * n;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  const Index beta1 = a / n, x1 = a % n, beta2 = b / n, x2 = b % n;
  if (beta1 != beta2) return out;
  const auto bu = static_cast<std::size_t>(beta1);
  std::vector<ComplexMatrix> y(static_cast<std::size_t>(f.chi_out));
  for (Index al = 0; al < f.chi_out; ++al) {
    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    for (const auto& sk : f.blocks[static_cast<std::size_t>(al)][bu]) {
      acc.noalias() += sk.sign * sk.k.col(x1) * sk.k.col(x2).adjoint();
    }
    y[static_cast<std::size_t>(al)] = std::move(acc);
  }
  for (Index bp = 0; bp < f.chi_in; ++bp) {
    ComplexMatrix z = ComplexMatrix::Zero(n, n);
    for (Index al = 0; al < f.chi_out; ++al) {
      const ComplexMatrix& ya = y[static_cast<std::size_t>(al)];
      if (ya.squaredNorm() == 0.0) continue;
      for (const auto& sk : f.blocks[static_cast<std::size_t>(al)][static_cast<std::size_t>(bp)]) {
        z.noalias() += sk.sign * (sk.k.adjoint() * ya * sk.k);
      }
    }
    out.block(bp * n, bp * n, n, n) = z;
  }
  return out;
}

ComplexMatrix apply_eps(const DoubledForm& f, Index a, Index b) {
  ComplexMatrix y = ComplexMatrix::Zero(f.n_out, f.n_out);
  for (const auto& sk : f.ops) y.noalias() += sk.sign * sk.k.col(a) * sk.k.col(b).adjoint();
  ComplexMatrix z = ComplexMatrix::Zero(f.n_in, f.n_in);
  for (const auto& sk : f.ops) z.noalias() += sk.sign * (sk.k.adjoint() * y * sk.k);
  return z;
}

enum class Embedding { diagonal, doubled };

template <class Form>
double purity_of(const Form& f, Index dim) {
  double total = 0.0;
  for (Index a = 0; a < dim; ++a)
    for (Index b = 0; b < dim; ++b) total += apply_eps(f, a, b).squaredNorm();
  return total / (static_cast<double>(dim) * static_cast<double>(dim));
}

double purity_with(const MpoTensor& m, Side side, Embedding e, bool& ok) {
  if (e == Embedding::diagonal) {
    DiagonalForm f;
    ok = diagonal_form(m, side, f);
    return ok ? purity_of(f, f.chi_in * f.n) : 0.0;
  }
  DoubledForm f;
  ok = doubled_form(m, side, f);
  return ok ? purity_of(f, f.n_in) : 0.0;
}

[[noreturn]] void non_cp(Side side) {
  throw InvalidArgument(std::string("cjs: blocks of ") + side_name(side) +
                        " admit no M~ (x) M~* decomposition (non-CP structure)");
}

}  // namespace

double cjs_purity(const MpoTensor& m, Side side) {
  check_cjs_input(m);
  bool ok = false;
  double p = purity_with(m, side, Embedding::diagonal, ok);
  if (ok) return p;
  p = purity_with(m, side, Embedding::doubled, ok);
  if (ok) return p;
  non_cp(side);
}

double cjs_current(const MpoTensor& m) {
  check_cjs_input(m);
  for (Embedding e : {Embedding::diagonal, Embedding::doubled}) {
    bool ok_l = false, ok_r = false;
    const double pl = purity_with(m, Side::left, e, ok_l);
    if (!ok_l) {
      if (e == Embedding::doubled) non_cp(Side::left);
      continue;
    }
    const double pr = purity_with(m, Side::right, e, ok_r);
    if (!ok_r) {
      if (e == Embedding::doubled) non_cp(Side::right);
      continue;
    }
    return 0.5 * std::log2(pl / pr);
  }
  non_cp(Side::left);
}

CjsState cjs_state(const MpoTensor& m, Side side) {
  check_cjs_input(m);
  DiagonalForm df;
  DoubledForm uf;
  const bool diag = diagonal_form(m, side, df);
  if (!diag && !doubled_form(m, side, uf)) non_cp(side);
  const Index dim = diag ? df.chi_in * df.n : uf.n_in;
  if (dim > 16) throw ResourceCapExceeded("cjs_state: state vector too large; use cjs_purity");
  // rho = sum_ab E_ab (x) eps(E_ab) / dim, vectorized row-major over (a, i, b, j)
  CjsState st;
  st.side = side;
  st.vector.assign(static_cast<std::size_t>(dim * dim * dim * dim), Complex(0.0, 0.0));
  for (Index a = 0; a < dim; ++a)
    for (Index b = 0; b < dim; ++b) {
      const ComplexMatrix e = diag ? apply_eps(df, a, b) : apply_eps(uf, a, b);
      for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) {
          const Index row = a * dim + i, col = b * dim + j;
          st.vector[static_cast<std::size_t>(row * dim * dim + col)] = e(i, j) / static_cast<double>(dim);
        }
    }
  return st;
}

}  // namespace qflow
