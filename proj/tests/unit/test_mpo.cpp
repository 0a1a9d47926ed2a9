#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qflow/channels.hpp"
#include "qflow/errors.hpp"
#include "qflow/flowmetrics.hpp"
#include "qflow/mpo.hpp"
#include "qflow/zoo.hpp"

using namespace qflow;

namespace {
Superoperator random_gate(std::uint64_t seed, int n_kraus, int d = 2) {
  return site_major_reorder(channel_to_superop(random_channel(seed, d, 2, n_kraus)));
}

double max_diff(const DenseTensor& a, const std::vector<Complex>& b) {
  REQUIRE(static_cast<std::size_t>(a.size()) == b.size());
  double m = 0.0;
  for (Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[static_cast<std::size_t>(i)]));
  return m;
}
}  // namespace

TEST_CASE("operator bases are orthonormal") {
  for (auto kind : {OperatorBasis::hermitian_preserving, OperatorBasis::pauli, OperatorBasis::matrix_units}) {
    const auto basis = operator_basis(2, kind);
    REQUIRE(basis.size() == 16);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        CHECK(std::abs(frobenius_product(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-13);
  }
  CHECK(operator_basis(3, OperatorBasis::hermitian_preserving).size() == 81);
  CHECK_THROWS_AS(operator_basis(3, OperatorBasis::pauli), InvalidArgument);
}

TEST_CASE("operator svd reconstructs V in every basis") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Superoperator v = random_gate(seed, 1 + static_cast<int>(seed % 3));
    for (auto kind : {OperatorBasis::hermitian_preserving, OperatorBasis::pauli, OperatorBasis::matrix_units}) {
      SvdOptions opts;
      opts.basis = kind;
      const OperatorSvd s = operator_svd(v, opts);
      CHECK(relative_error(reconstruct(s), v.matrix()) < 1e-10);
      CHECK(std::abs(s.singular_values.squaredNorm() - v.matrix().squaredNorm()) < 1e-9 * v.matrix().squaredNorm());
    }
  }
}

TEST_CASE("hermitian preserving maps have real coefficients in the HP basis") {
  const Superoperator v = random_gate(5, 2);
  const ComplexMatrix c = operator_coefficients(v.matrix(), operator_basis(2, OperatorBasis::hermitian_preserving));
  CHECK(c.imag().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("SWAP has full operator Schmidt rank") {
  const Superoperator s(2, 2, swap_superop(2), Ordering::site_major);
  CHECK(operator_svd(s).chi == 16);
  const Superoperator id(2, 2, ComplexMatrix::Identity(16, 16), Ordering::site_major);
  CHECK(operator_svd(id).chi == 1);
}

TEST_CASE("factored svd equals the svd of the product") {
  const ComplexMatrix l = conjugation_superop(random_unitary(1, 2));
  const ComplexMatrix r = channel_to_superop(random_channel(2, 2, 1, 2)).matrix();
  const Superoperator core(2, 2, swap_superop(2), Ordering::site_major);
  const OperatorSvd f = operator_svd_factored(core, l, r);
  CHECK(relative_error(reconstruct(f), swap_superop(2) * kron(l, r)) < 1e-12);
}

TEST_CASE("local tensor matches its definition") {
  const TwoSiteRule rule = make_two_site_rule(random_gate(1, 2), random_gate(2, 2));
  const OperatorSvd s = rule_svd(rule);
  const MpoTensor m = build_local_tensor(rule.w, s);
  CHECK(max_diff(m.cell(), oracle::local_tensor(rule.w.matrix(), s.factors_right, s.factors_left)) < 1e-13);
}

TEST_CASE("partitions follow the index layout") {
  const MpoTensor m = rule_tensor(make_two_site_rule(random_gate(3, 2), random_gate(4, 1)));
  const DenseTensor& t = m.cell();
  const Index chi = t.dim(0), p = t.dim(2);
  const PartitionPair pp = partition(m);
  for (Index a = 0; a < chi; ++a)
    for (Index b = 0; b < chi; ++b)
      for (Index j = 0; j < p; j += 3)
        for (Index k = 0; k < p; k += 5) {
          CHECK(pp.m_left(a * p + k, b * p + j) == t.at({a, b, j, k}));
          CHECK(pp.m_right(a * p + j, b * p + k) == t.at({a, b, j, k}));
        }
  CHECK(max_diff(unpartition(pp.m_left, Side::left, chi, chi, p), t.values()) == 0.0);
  CHECK(max_diff(unpartition(pp.m_right, Side::right, chi, chi, p), t.values()) == 0.0);
}

TEST_CASE("shift tensor ranks") {
  for (int d : {2, 3}) {
    const PartitionPair pp = partition(shift_tensor(d, Side::right));
    const CurrentReport r = information_current(pp);
    CHECK(*r.rank_left == 1);
    CHECK(*r.rank_right == Index(d) * d * d * d);
    CHECK(*r.index == doctest::Approx(2.0 * oracle::log2(d)).epsilon(1e-12));
    CHECK(r.current == doctest::Approx(2.0 * oracle::log2(d)).epsilon(1e-12));
  }
  const CurrentReport l = information_current(partition(shift_tensor(2, Side::left)));
  CHECK(l.current == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("block and compose of one are the identity") {
  const MpoTensor m = rule_mpo(NamedRule{RuleKind::amplitude_damping, Side::right, 0.4});
  CHECK(max_diff(block(m, 1).entries(), m.cell().values()) == 0.0);
  CHECK(max_diff(compose(m, 1).entries(), m.cell().values()) == 0.0);
  CHECK_THROWS_AS(block(m, 0), InvalidArgument);
}

TEST_CASE("blocked entries contract neighbouring cells") {
  const MpoTensor m = shift_tensor(2, Side::right);
  const DenseTensor& t = m.cell();
  const Index chi = t.dim(0), p = t.dim(2);
  oracle::Operand a{{chi, chi, p, p}, t.values(), {1, 2, 3, 4}};
  oracle::Operand b{{chi, chi, p, p}, t.values(), {2, 5, 6, 7}};
  const auto ref = oracle::einsum({a, b}, {1, 5, 3, 6, 4, 7});
  CHECK(max_diff(block(m, 2).entries(), ref) < 1e-14);
}

TEST_CASE("composed entries contract a two-by-two grid") {
  std::mt19937_64 g(17);
  std::normal_distribution<double> n;
  DenseTensor cell({2, 2, 4, 4});
  for (Index i = 0; i < cell.size(); ++i) cell[i] = Complex(n(g), n(g));
  const MpoTensor m(2, 1, cell);
  const std::vector<long> dims{2, 2, 4, 4};
  auto op = [&](std::vector<int> labels) { return oracle::Operand{dims, cell.values(), std::move(labels)}; };
  // layer 0 maps 10,11 -> 20,21; layer 1 maps 20,21 -> 30,31
  const auto row0 = oracle::einsum({op({1, 2, 10, 20}), op({2, 3, 11, 21})}, {1, 3, 10, 11, 20, 21});
  const auto row1 = oracle::einsum({op({4, 5, 20, 30}), op({5, 6, 21, 31})}, {4, 6, 20, 21, 30, 31});
  const auto ref = oracle::einsum({oracle::Operand{{2, 2, 4, 4, 4, 4}, row0, {1, 3, 10, 11, 20, 21}},
                                   oracle::Operand{{2, 2, 4, 4, 4, 4}, row1, {4, 6, 20, 21, 30, 31}}},
                                  {1, 4, 3, 6, 10, 11, 30, 31});
  const MpoTensor c = compose(m, 2);
  CHECK(c.width() == 2);
  CHECK(c.layers() == 2);
  CHECK(max_diff(c.entries(), ref) < 1e-12);
}

TEST_CASE("dimension cap") {
  const MpoTensor m = rule_mpo(NamedRule{RuleKind::reset_swap, Side::left, 0.5});
  DimensionCap cap;
  cap.max_matrix_dim = 1000;
  CHECK_THROWS_AS(compose(m, 2, cap), ResourceCapExceeded);
  CHECK_THROWS_AS(block(m, 8), ResourceCapExceeded);
}

TEST_CASE("network moments agree with dense moments") {
  const MpoTensor small = rule_mpo(NamedRule{RuleKind::amplitude_damping, Side::right, 0.6});
  for (Side s : {Side::left, Side::right})
    for (int k = 1; k <= 3; ++k) {
      const double dense = trace_moment(small, s, k);
      CHECK(network_trace_moment(small, s, k) == doctest::Approx(dense).epsilon(1e-10));
    }
  const MpoTensor blocked = block(small, 2);
  EvaluateOptions dense_opts;
  dense_opts.dense_limit = 1024;
  EvaluateOptions net_opts;
  net_opts.dense_limit = 16;
  const CurrentReport d = evaluate_current(blocked, dense_opts);
  const CurrentReport n = evaluate_current(blocked, net_opts);
  CHECK(n.singular_left.empty());
  CHECK_FALSE(n.rank_left.has_value());
  CHECK(n.current == doctest::Approx(d.current).epsilon(1e-9));
  CHECK(n.trace_moment2_left == doctest::Approx(d.trace_moment2_left).epsilon(1e-9));
}

TEST_CASE("mirrored rules and tensors have opposite currents") {
  const TwoSiteRule rule = make_two_site_rule(random_gate(8, 2), random_gate(9, 3));
  const double i0 = evaluate_current(rule_tensor(rule)).current;
  CHECK(evaluate_current(rule_tensor(mirror_rule(rule))).current == doctest::Approx(-i0).epsilon(1e-10));
  CHECK(evaluate_current(mirror_tensor(rule_tensor(rule))).current == doctest::Approx(-i0).epsilon(1e-10));
}

TEST_CASE("conjugation rejects non-unitary frames") {
  const TwoSiteRule rule = make_two_site_rule(random_gate(1, 1), random_gate(2, 1));
  CHECK_THROWS_AS(conjugate_rule(rule, ComplexMatrix::Identity(2, 2) * 2.0), InvalidArgument);
}
