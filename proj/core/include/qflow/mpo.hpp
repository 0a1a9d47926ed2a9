#pragma once

#include <optional>
#include <vector>

#include "qflow/channels.hpp"
#include "qflow/network.hpp"
#include "qflow/tensor.hpp"

namespace qflow {

enum class Side { left, right };

Side opposite(Side s);

// Orthonormal bases of operators on one vectorized site (D_s x D_s, D_s = d^2).
enum class OperatorBasis {
  hermitian_preserving,  // real expansion coefficients for HP maps
  pauli,                 // (sigma^a (x) sigma^b) / 2, qubits only
  matrix_units,
};

std::vector<ComplexMatrix> operator_basis(int site_dim, OperatorBasis kind);

struct SvdOptions {
  OperatorBasis basis = OperatorBasis::hermitian_preserving;
  double rank_tol = kDefaultRankTolerance;
};

// V = sum_k B_k (x) A_k, B_k on site 1 and A_k on site 2, sqrt(D_kk) on each.
struct OperatorSvd {
  int site_dim = 2;
  Index chi = 0;
  std::vector<ComplexMatrix> factors_left;   // B_k
  std::vector<ComplexMatrix> factors_right;  // A_k
  RealVector singular_values;                // D_kk, truncated
};

OperatorSvd operator_svd(const Superoperator& v, const SvdOptions& options = {});

// core * (left_local (x) right_local), with the SVD taken of `core` only.
// Locals are single-site superoperator matrices (D_s x D_s).
OperatorSvd operator_svd_factored(const Superoperator& core, const ComplexMatrix& left_local,
                                  const ComplexMatrix& right_local, const SvdOptions& options = {});

ComplexMatrix reconstruct(const OperatorSvd& s);

// Coefficients c_rs of a site-major two-site matrix in `basis` (x) `basis`.
ComplexMatrix operator_coefficients(const ComplexMatrix& v, const std::vector<ComplexMatrix>& basis);

struct DimensionCap {
  Index max_matrix_dim = Index(1) << 16;
};

// Local MPO tensor. The stored cell has index order (left, right, in, out) with
// in/out grouping `cell_sites` vectorized sites. Blocked and composed tensors
// keep the cell and a grid shape (width cells per layer, layers) instead of
// dense entries.
class MpoTensor {
 public:
  MpoTensor(int site_dim, int cell_sites, DenseTensor cell, int width = 1, int layers = 1);

  int site_dim() const noexcept { return site_dim_; }
  Index site_space() const noexcept { return Index(site_dim_) * site_dim_; }
  int cell_sites() const noexcept { return cell_sites_; }
  int width() const noexcept { return width_; }
  int layers() const noexcept { return layers_; }
  int n_sites() const noexcept { return cell_sites_ * width_; }
  bool is_elementary() const noexcept { return width_ == 1 && layers_ == 1; }

  Index cell_chi_left() const { return cell_.dim(0); }
  Index cell_chi_right() const { return cell_.dim(1); }
  Index chi_left() const;
  Index chi_right() const;
  Index physical_dim() const;
  // Largest side of either matricization.
  Index matrix_dim() const;

  const DenseTensor& cell() const noexcept { return cell_; }

  // Dense (left, right, in, out) entries. Contracts the grid when needed.
  DenseTensor entries(Index max_matrix_dim = 256) const;

 private:
  int site_dim_;
  int cell_sites_;
  DenseTensor cell_;
  int width_;
  int layers_;
};

MpoTensor build_local_tensor(const Superoperator& w, const OperatorSvd& svd_of_v);

MpoTensor shift_tensor(int d, Side direction);

// Spatial reflection of an elementary tensor: swaps bonds and reverses sites.
MpoTensor mirror_tensor(const MpoTensor& m);

struct PartitionPair {
  ComplexMatrix m_left;   // rows (alpha, out), cols (beta, in)
  ComplexMatrix m_right;  // rows (alpha, in),  cols (beta, out)
};

inline constexpr Index kDenseMatrixLimit = 256;

PartitionPair partition(const MpoTensor& m, Index max_matrix_dim = kDenseMatrixLimit);
// Inverse of one matricization, back to (left, right, in, out).
DenseTensor unpartition(const ComplexMatrix& part, Side side, Index chi_left, Index chi_right, Index phys);

MpoTensor block(const MpoTensor& m, int n, const DimensionCap& cap = {});
MpoTensor compose(const MpoTensor& m, int n, const DimensionCap& cap = {});

// Tr[(X^dag X)^k] for X = M_L or M_R of `m`, evaluated as a tensor network.
double network_trace_moment(const MpoTensor& m, Side side, int k, const ContractionOptions& options = {},
                            ContractionStats* stats = nullptr);

struct NetworkMoments {
  double m1_left = 0.0, m1_right = 0.0, m2_left = 0.0, m2_right = 0.0;
};
// First and second moments of both matricizations sharing one cell split.
NetworkMoments network_moments(const MpoTensor& m, const ContractionOptions& options = {});

// Two-site rules: V (first layer) and W (second layer), site-major.
struct GateFactorization {
  ComplexMatrix core;         // site-major two-site
  ComplexMatrix left_local;   // D_s x D_s
  ComplexMatrix right_local;  // D_s x D_s
};

struct TwoSiteRule {
  Superoperator v;
  Superoperator w;
  std::optional<GateFactorization> v_factors;
};

TwoSiteRule make_two_site_rule(const Superoperator& v, const Superoperator& w);
OperatorSvd rule_svd(const TwoSiteRule& rule, const SvdOptions& options = {});
MpoTensor rule_tensor(const TwoSiteRule& rule, const SvdOptions& options = {});

// Conjugation of both gates by SWAP; factorization follows along.
TwoSiteRule mirror_rule(const TwoSiteRule& rule);
// (U^dag (x) U^dag) X (U (x) U) for X in {V, W} with U the superoperator of u.
TwoSiteRule conjugate_rule(const TwoSiteRule& rule, const ComplexMatrix& u);

}  // namespace qflow
