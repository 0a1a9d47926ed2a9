#pragma once

#include <cstdint>
#include <vector>

#include "qflow/linalg.hpp"

namespace qflow {

// system_major: H1 H2 H1* H2*;  site_major: H1 H1* H2 H2*.
enum class Ordering { system_major, site_major };

class KrausChannel {
 public:
  // Validates shapes and sum K^dag K = 1 within `tp_tol`.
  KrausChannel(int site_dim, int arity, std::vector<ComplexMatrix> kraus_ops, double tp_tol = 1e-12);

  int site_dim() const noexcept { return site_dim_; }
  int arity() const noexcept { return arity_; }
  Index dim() const noexcept { return dim_; }
  const std::vector<ComplexMatrix>& kraus_ops() const noexcept { return ops_; }

  ComplexMatrix apply(const ComplexMatrix& rho) const;

 private:
  int site_dim_;
  int arity_;
  Index dim_;
  std::vector<ComplexMatrix> ops_;
};

// |sum_mu K^dag K - 1|_F
double trace_preservation_error(const std::vector<ComplexMatrix>& kraus_ops);

class Superoperator {
 public:
  Superoperator(int site_dim, int arity, ComplexMatrix matrix, Ordering ordering);

  int site_dim() const noexcept { return site_dim_; }
  int arity() const noexcept { return arity_; }
  Ordering ordering() const noexcept { return ordering_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

 private:
  int site_dim_;
  int arity_;
  ComplexMatrix matrix_;
  Ordering ordering_;
};

struct Liouvillian {
  int site_dim = 2;
  int arity = 1;
  std::vector<ComplexMatrix> jump_ops;
  double tau = 1.0;
};

ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v);

// Row vector of the vectorized identity; dual of the trace functional.
ComplexVector vectorized_identity(Index dim);

// sum_mu K (x) K*, system-major.
Superoperator channel_to_superop(const KrausChannel& ch);

// (1 (x) Sigma (x) 1) m (1 (x) Sigma (x) 1) on a two-site superoperator matrix.
// An involution; maps system-major to site-major and back.
ComplexMatrix swap_middle_factors(const ComplexMatrix& m, int site_dim);
Superoperator site_major_reorder(const Superoperator& w);

// exp(tau * generator), system-major.
ComplexMatrix liouvillian_generator(const Liouvillian& l);
Superoperator liouvillian_superop(const Liouvillian& l);

ComplexMatrix random_unitary(std::uint64_t seed, Index n);
KrausChannel random_channel(std::uint64_t seed, int d, int arity, int n_kraus);

// u (x) u*, the single-site superoperator of a unitary or any operator.
ComplexMatrix conjugation_superop(const ComplexMatrix& u);

// Vectorized two-site SWAP superoperator, site-major.
ComplexMatrix swap_superop(int site_dim);

// Trace-preservation residual of a superoperator: |<<1| S - <<1||.
double superop_trace_error(const Superoperator& s);

}  // namespace qflow
