#include <doctest.h>

#include "oracles.hpp"
#include "qflow/channels.hpp"
#include "qflow/errors.hpp"
#include "qflow/flowmetrics.hpp"
#include "qflow/zoo.hpp"

using namespace qflow;

namespace {
Superoperator gate(const KrausChannel& ch) { return site_major_reorder(channel_to_superop(ch)); }

TwoSiteRule random_rule(std::uint64_t seed, int n_kraus) {
  return make_two_site_rule(gate(random_channel(seed, 2, 2, n_kraus)),
                            gate(random_channel(seed + 500, 2, 2, n_kraus)));
}

double current_of(const NamedRule& spec) { return evaluate_current(rule_mpo(spec)).current; }
}  // namespace

TEST_CASE("sigma operator validation") {
  CHECK_THROWS_AS(SigmaOperator(ComplexMatrix::Identity(2, 2)), InvalidArgument);
  ComplexMatrix nh = ComplexMatrix::Identity(2, 2) / 2.0;
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(SigmaOperator{nh}, InvalidArgument);
  ComplexMatrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(SigmaOperator{neg}, InvalidArgument);
}

TEST_CASE("renyi entropies of simple states") {
  const SigmaOperator mixed(ComplexMatrix::Identity(16, 16) / 16.0);
  CHECK(renyi(mixed, 0) == doctest::Approx(4.0));
  CHECK(renyi(mixed, 2) == doctest::Approx(4.0));
  ComplexMatrix pure = ComplexMatrix::Zero(4, 4);
  pure(2, 2) = 1.0;
  CHECK(renyi(SigmaOperator(pure), 2) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(renyi(mixed, 1), InvalidArgument);
}

TEST_CASE("worked values") {
  CHECK(evaluate_current(shift_tensor(2, Side::right)).current == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(current_of({RuleKind::reset_swap, Side::left, 0.5}) == doctest::Approx(oracle::reset_left(0.5)).epsilon(1e-10));
  CHECK(current_of({RuleKind::reset_swap, Side::left, 0.5}) == doctest::Approx(-0.526069).epsilon(1e-6));
  CHECK(current_of({RuleKind::dephase_swap, Side::left, 0.5}) == doctest::Approx(-0.443607).epsilon(1e-6));
}

TEST_CASE("three evaluation paths agree on random noisy rules") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const TwoSiteRule rule = random_rule(seed, 1 + static_cast<int>(seed % 4));
    const MpoTensor m = rule_tensor(rule);
    const double dense = evaluate_current(m).current;
    CHECK(information_current_fast(rule.w, rule_svd(rule)) == doctest::Approx(dense).epsilon(1e-9).scale(1.0));
    CHECK(cjs_current(m) == doctest::Approx(dense).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("first moments coincide and the ratio form equals the entropy form") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const PartitionPair pp = partition(rule_tensor(random_rule(seed + 40, 3)));
    const auto [l, r] = first_moment_check(pp);
    CHECK(l == doctest::Approx(r).epsilon(1e-10));
    const CurrentReport rep = information_current(pp);
    CHECK(rep.current_ratio == doctest::Approx(rep.current).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("random unitary rules carry no current") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CurrentReport rep = evaluate_current(rule_tensor(random_rule(seed + 90, 1)));
    CHECK(std::abs(rep.current) < 1e-9);
    CHECK(std::abs(*rep.index) < 1e-12);
  }
}

TEST_CASE("the current is continuous where the index jumps") {
  const NamedRule at1{RuleKind::reset_swap, Side::right, 1.0};
  const NamedRule near1{RuleKind::reset_swap, Side::right, 1.0 - 1e-3};
  const CurrentReport a = evaluate_current(rule_mpo(at1));
  const CurrentReport b = evaluate_current(rule_mpo(near1));
  CHECK(std::abs(a.current - b.current) < 1e-2);
  CHECK(*a.index == doctest::Approx(2.0));
  CHECK(*b.index == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("single-site unitary conjugation leaves the current unchanged") {
  const TwoSiteRule rule = std::get<TwoSiteRule>(make_rule({RuleKind::amplitude_damping, Side::right, 0.4}));
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto [before, after] = unitary_conjugation_check(rule, random_unitary(seed, 2));
    CHECK(after == doctest::Approx(before).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("cjs state norm is the purity") {
  const MpoTensor m = rule_mpo({RuleKind::amplitude_damping, Side::right, 0.5});
  for (Side s : {Side::left, Side::right}) {
    const CjsState st = cjs_state(m, s);
    double n2 = 0.0;
    for (const auto& z : st.vector) n2 += std::norm(z);
    CHECK(n2 == doctest::Approx(cjs_purity(m, s)).epsilon(1e-10));
  }
}

TEST_CASE("separability rank of product and entangling gates") {
  const Superoperator product(2, 2,
                              kron(conjugation_superop(random_unitary(1, 2)), conjugation_superop(random_unitary(2, 2))),
                              Ordering::site_major);
  CHECK(separability_rank(product) == 1);
  CHECK(separability_rank(Superoperator(2, 2, swap_superop(2), Ordering::site_major)) == 1);
  CHECK(separability_rank(gate(random_channel(3, 2, 2, 2))) > 1);
}

TEST_CASE("swap symmetry") {
  const ComplexMatrix u = conjugation_superop(random_unitary(5, 2));
  const Superoperator sym(2, 2, kron(u, u), Ordering::site_major);
  CHECK(swap_symmetry_check(sym, sym, 1e-10));
  const Superoperator asym = gate(random_channel(6, 2, 2, 1));
  CHECK_FALSE(swap_symmetry_check(asym, sym, 1e-10));
}
