#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qflow/mpo.hpp"

namespace qflow {

// Trace-one, Hermitian, positive semidefinite operator.
class SigmaOperator {
 public:
  explicit SigmaOperator(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  // Descending, negatives above the -1e-10 floor clamped to 0.
  const RealVector& eigenvalues() const noexcept { return eigenvalues_; }

 private:
  ComplexMatrix matrix_;
  RealVector eigenvalues_;
};

// M^dag M / Tr[M^dag M]
SigmaOperator gram(const ComplexMatrix& m_part);

// alpha = 0 (Hartley) or 2, in bits.
double renyi(const SigmaOperator& sigma, int alpha, double rank_tol = kDefaultRankTolerance);

double rank_ratio_index(const PartitionPair& pair, double rank_tol = kDefaultRankTolerance);

struct CurrentReport {
  std::optional<double> index;
  double current = 0.0;        // (s2_right - s2_left) / 2
  double current_ratio = 0.0;  // log2(m2_left / m2_right) / 2
  double s2_left = 0.0;
  double s2_right = 0.0;
  double trace_moment1_left = 0.0;
  double trace_moment1_right = 0.0;
  double trace_moment2_left = 0.0;
  double trace_moment2_right = 0.0;
  std::optional<Index> rank_left;
  std::optional<Index> rank_right;
  std::vector<double> singular_left;  // empty when unavailable
  std::vector<double> singular_right;
};

CurrentReport information_current(const PartitionPair& pair, double rank_tol = kDefaultRankTolerance);

struct EvaluateOptions {
  double rank_tol = kDefaultRankTolerance;
  Index dense_limit = kDenseMatrixLimit;  // larger matricizations use the network path
  ContractionOptions contraction;
};

// Dense partition path when small, tensor-network moments otherwise (no spectra).
CurrentReport evaluate_current(const MpoTensor& m, const EvaluateOptions& options = {});

// Current from W^dag W, A_k and B_k without forming the matricizations.
double information_current_fast(const Superoperator& w, const OperatorSvd& svd_of_v);

struct CjsState {
  std::vector<Complex> vector;
  Side side = Side::left;
};

// Purity <rho|rho> of the Choi state of eps = Phi^dag o Phi for one partition.
double cjs_purity(const MpoTensor& m, Side side);
// Full vectorized Choi state; small inputs only.
CjsState cjs_state(const MpoTensor& m, Side side);
double cjs_current(const MpoTensor& m);

std::pair<double, double> first_moment_check(const PartitionPair& pair);

// S V S^dag == V and S W S^dag == W with S = SWAP (U (x) U), U the superoperator of `frame`.
bool swap_symmetry_check(const Superoperator& v, const Superoperator& w, double tol,
                         const std::optional<ComplexMatrix>& frame = std::nullopt);

Index separability_rank(const Superoperator& w, double rank_tol = kDefaultRankTolerance);

double trace_moment(const ComplexMatrix& m_part, int k);
double trace_moment(const MpoTensor& m, Side side, int k, Index dense_limit = kDenseMatrixLimit);

// (I of rule, I of conjugated rule), both through the full pipeline.
std::pair<double, double> unitary_conjugation_check(const TwoSiteRule& rule, const ComplexMatrix& u,
                                                    const SvdOptions& options = {});

}  // namespace qflow
