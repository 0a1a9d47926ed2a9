// Acceptance checks. Prints one PASS/FAIL line per criterion.
// Usage: acceptance [criterion-number ...]   (no arguments: all)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qflow/qflow.hpp"

using namespace qflow;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
  void within(double delta, double tol, const std::string& what) {
    detail << " " << what << "=" << delta << "(tol " << tol << ")";
    if (!(std::abs(delta) <= tol)) {
      pass = false;
      detail << "!";
    }
  }
};

Superoperator gate(const KrausChannel& ch) { return site_major_reorder(channel_to_superop(ch)); }

TwoSiteRule random_rule(std::uint64_t seed, int n_kraus) {
  return make_two_site_rule(gate(random_channel(seed, 2, 2, n_kraus)), gate(random_channel(seed + 1000, 2, 2, n_kraus)));
}

double cur(const MpoTensor& m) { return evaluate_current(m).current; }
double cur(const NamedRule& s) { return cur(rule_mpo(s)); }

std::vector<double> grid(int n) {
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(static_cast<double>(i) / n);
  return g;
}

std::vector<NamedRule> zoo_rules(double p) {
  return {
      {RuleKind::shift, Side::right},
      {RuleKind::shift, Side::left},
      {RuleKind::reset_swap, Side::left, p},
      {RuleKind::reset_swap, Side::right, p},
      {RuleKind::dephase_swap, Side::left, p},
      {RuleKind::dephase_swap, Side::right, p},
      {RuleKind::amplitude_damping, Side::right, p},
      {RuleKind::amplitude_damping, Side::left, p},
      {RuleKind::asymmetric_swap, Side::left, 0.0, p, 1.0 - p},
  };
}

void c1(Outcome& o) {
  const MpoTensor m = shift_tensor(2, Side::right);
  const CurrentReport r = evaluate_current(m);
  o.within(r.current - 2.0, 1e-9, "I-2");
  o.within(*r.index - 2.0, 1e-9, "ind-2");
  o.within(cur(block(m, 2)) - 2.0, 1e-9, "blocked-2");
  o.within(cur(compose(m, 2)) - 4.0, 1e-9, "composed-4");
}

void c2(Outcome& o) {
  double worst = 0.0, parity = 0.0;
  for (double p : grid(20)) {
    const double l = cur(NamedRule{RuleKind::reset_swap, Side::left, p});
    const double r = cur(NamedRule{RuleKind::reset_swap, Side::right, p});
    worst = std::max({worst, std::abs(l - oracle::reset_left(p)), std::abs(r + oracle::reset_left(p))});
    parity = std::max(parity, std::abs(l + r));
  }
  o.within(worst, 1e-9, "max|I-closed|");
  o.within(cur(NamedRule{RuleKind::reset_swap, Side::left, 1.0}) + 2.0, 1e-9, "I_left(1)+2");
  o.within(cur(NamedRule{RuleKind::reset_swap, Side::right, 1.0}) - 2.0, 1e-9, "I_right(1)-2");
  o.within(parity, 1e-9, "max|left+right|");
}

void c3(Outcome& o) {
  double worst = 0.0;
  double gap_half = 0.0, gap_ends = 0.0;
  for (double p : grid(20)) {
    const MpoTensor m = rule_mpo(NamedRule{RuleKind::reset_swap, Side::left, p});
    const double ic = cur(compose(m, 2));
    worst = std::max(worst, std::abs(ic - oracle::reset_left_composed(p)));
    const double gap = std::abs(ic - 2.0 * oracle::reset_left(p));
    if (p == 0.0 || p == 1.0) gap_ends = std::max(gap_ends, gap);
    if (std::abs(p - 0.5) < 1e-12) gap_half = gap;
  }
  o.within(worst, 1e-9, "max|I_c-closed|");
  o.within(gap_ends, 1e-9, "additivity-gap(p=0,1)");
  o.detail << " additivity-gap(p=0.5)=" << gap_half;
  o.expect(gap_half > 1e-3, "additivity gap at p=0.5 exceeds 1e-3");
}

void c4(Outcome& o) {
  double worst = 0.0;
  for (double p : grid(20))
    worst = std::max(worst, std::abs(cur(NamedRule{RuleKind::dephase_swap, Side::left, p}) - oracle::dephase_left(p)));
  o.within(worst, 1e-9, "max|I-closed|");
  o.within(cur(NamedRule{RuleKind::dephase_swap, Side::left, 1.0}) + 1.0, 1e-9, "I_left(1)+1");
  double worst_c = 0.0;
  for (double p : grid(20)) {
    const MpoTensor m = rule_mpo(NamedRule{RuleKind::dephase_swap, Side::left, p});
    worst_c = std::max(worst_c, std::abs(cur(compose(m, 2)) - oracle::dephase_left_composed(p)));
  }
  o.within(worst_c, 1e-9, "max|I_c-closed|");
}

void c5(Outcome& o) {
  auto report = [](RuleKind k, Side s, double p) { return evaluate_current(rule_mpo(NamedRule{k, s, p})); };
  const CurrentReport r09 = report(RuleKind::reset_swap, Side::right, 0.9);
  const CurrentReport r1 = report(RuleKind::reset_swap, Side::right, 1.0);
  const CurrentReport dl = report(RuleKind::dephase_swap, Side::left, 1.0);
  const CurrentReport dr = report(RuleKind::dephase_swap, Side::right, 1.0);
  o.detail << " reset-right(0.9)=(" << *r09.rank_left << "," << *r09.rank_right << ")"
           << " reset-right(1)=(" << *r1.rank_left << "," << *r1.rank_right << ")"
           << " dephase-left(1)=(" << *dl.rank_left << "," << *dl.rank_right << ")"
           << " dephase-right(1)=(" << *dr.rank_left << "," << *dr.rank_right << ")";
  o.expect(*r09.rank_left == 16 && *r09.rank_right == 16, "reset-right p=0.9 ranks (16,16)");
  o.expect(*r1.rank_left == 1 && *r1.rank_right == 16, "reset-right p=1 ranks (1,16)");
  o.within(*r09.index, 1e-12, "ind(0.9)");
  o.within(*r1.index - 2.0, 1e-12, "ind(1)-2");
  o.expect(*dl.rank_left == 16 && *dl.rank_right == 4, "dephase-left p=1 ranks (16,4)");
  o.within(*dl.index + 1.0, 1e-12, "ind_dephase_left+1");
  o.expect(*dr.rank_left == 4 && *dr.rank_right == 16, "dephase-right p=1 ranks (4,16)");
  o.within(*dr.index - 1.0, 1e-12, "ind_dephase_right-1");
}

void c6(Outcome& o) {
  double i_max = 0.0, spec = 0.0, mom = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MpoTensor m = rule_tensor(random_rule(seed, 1));
    const PartitionPair pp = partition(m);
    const CurrentReport r = information_current(pp);
    i_max = std::max(i_max, std::abs(r.current));
    for (std::size_t i = 0; i < r.singular_left.size(); ++i)
      spec = std::max(spec, std::abs(r.singular_left[i] - r.singular_right[i]));
    for (int k = 1; k <= 4; ++k) {
      const double a = trace_moment(pp.m_left, k), b = trace_moment(pp.m_right, k);
      mom = std::max(mom, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
    }
  }
  o.within(i_max, 1e-9, "max|I|");
  o.within(spec, 1e-8, "max|spectrum diff|");
  o.within(mom, 1e-8, "max rel moment diff");
}

void c7(Outcome& o) {
  double worst = 0.0;
  for (const auto& spec : zoo_rules(0.5)) {
    const auto [l, r] = first_moment_check(partition(rule_mpo(spec)));
    worst = std::max(worst, std::abs(l - r) / std::max(l, r));
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto [l, r] = first_moment_check(partition(rule_tensor(random_rule(seed + 50, 2 + static_cast<int>(seed % 3)))));
    worst = std::max(worst, std::abs(l - r) / std::max(l, r));
  }
  o.within(worst, 1e-9, "max rel|Tr L - Tr R|");
}

void c8(Outcome& o) {
  double df = 0.0, dc = 0.0, fc = 0.0;
  for (double p : {0.25, 0.5, 0.75})
    for (const auto& spec : zoo_rules(p)) {
      const MpoTensor m = rule_mpo(spec);
      const double dense = cur(m);
      const double cjs = cjs_current(m);
      dc = std::max(dc, std::abs(dense - cjs));
      const Rule rule = make_rule(spec);
      if (const auto* two = std::get_if<TwoSiteRule>(&rule)) {
        const double fast = information_current_fast(two->w, rule_svd(*two));
        df = std::max(df, std::abs(dense - fast));
        fc = std::max(fc, std::abs(fast - cjs));
      }
    }
  o.within(df, 1e-9, "dense-vs-fast");
  o.within(dc, 1e-9, "dense-vs-cjs");
  o.within(fc, 1e-9, "fast-vs-cjs");
}

void c9(Outcome& o) {
  double worst = 0.0;
  for (Side s : {Side::left, Side::right})
    for (double p : {0.25, 0.5, 0.75}) {
      const MpoTensor m = rule_mpo(NamedRule{RuleKind::reset_swap, s, p});
      worst = std::max(worst, std::abs(cur(block(m, 2)) - cur(m)));
    }
  o.within(worst, 1e-9, "reset max|blocked-unblocked|");
  for (double p : {0.1, 0.5, 0.9}) {
    const MpoTensor m = rule_mpo(NamedRule{RuleKind::amplitude_damping, Side::right, p});
    o.detail << " AD(" << p << ") blocked-unblocked=" << cur(block(m, 2)) - cur(m);
  }
}

void c10(Outcome& o) {
  const ComplexMatrix x = (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished();
  double worst = 0.0;
  bool sym = true;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b) {
      const NamedRule spec{RuleKind::asymmetric_swap, Side::left, 0.0, a / 4.0, b / 4.0};
      worst = std::max(worst, std::abs(cur(spec)));
      const TwoSiteRule rule = std::get<TwoSiteRule>(make_rule(spec));
      sym = sym && swap_symmetry_check(rule.v, rule.w, 1e-10, x);
    }
  o.within(worst, 1e-9, "max|I|");
  o.expect(sym, "swap symmetric after X1X2 conjugation");
}

void c11(Outcome& o) {
  auto rank = [](double p) {
    return separability_rank(std::get<TwoSiteRule>(make_rule(NamedRule{RuleKind::amplitude_damping, Side::right, p})).w);
  };
  o.detail << " rank(0)=" << rank(0.0);
  o.expect(rank(0.0) == 1, "rank 1 at p=0");
  for (int i = 1; i <= 10; ++i) o.expect(rank(i / 10.0) == 4, "rank 4 at p=" + std::to_string(i / 10.0));
}

void c12(Outcome& o) {
  const TwoSiteRule rule = std::get<TwoSiteRule>(make_rule(NamedRule{RuleKind::reset_swap, Side::left, 0.5}));
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto [a, b] = unitary_conjugation_check(rule, random_unitary(seed + 300, 2));
    worst = std::max(worst, std::abs(a - b));
  }
  o.within(worst, 1e-9, "max|I-I_conj|");
}

void c13(Outcome& o) {
  double prev = cur(NamedRule{RuleKind::amplitude_damping, Side::right, 0.0});
  o.within(prev, 1e-9, "I(0)");
  double drop = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double c = cur(NamedRule{RuleKind::amplitude_damping, Side::right, i / 10.0});
    drop = std::max(drop, prev - c);
    prev = c;
  }
  o.detail << " largest-decrease=" << drop;
  o.expect(drop <= 0.0, "non-decreasing");
  double lv = 0.0;
  for (double p : {0.1, 0.5, 0.9}) {
    const ComplexMatrix a = liouvillian_superop(make_liouvillian(NamedRule{RuleKind::amplitude_damping, Side::right, p})).matrix();
    const ComplexMatrix b = oracle::superop_by_action(amplitude_damping_channel(p, Side::right).kraus_ops());
    lv = std::max(lv, (a - b).cwiseAbs().maxCoeff());
  }
  o.within(lv, 1e-10, "max|Liouvillian-Kraus|");
}

void c14(Outcome& o) {
  double worst = 0.0;
  for (double p : {0.25, 0.5, 0.75})
    for (const auto& spec : zoo_rules(p)) worst = std::max(worst, std::abs(cur(spec) + cur(mirrored(spec))));
  o.within(worst, 1e-10, "max|I+I_mirror|");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"shift map current and index", c1},
      {"reset-swap closed form", c2},
      {"reset-swap composition", c3},
      {"dephase-swap closed form and composition", c4},
      {"rank discontinuities", c5},
      {"unitary suite", c6},
      {"first-moment equality", c7},
      {"path equality", c8},
      {"blocking", c9},
      {"swap symmetry", c10},
      {"separability", c11},
      {"unitary conjugation", c12},
      {"amplitude-damping monotonicity", c13},
      {"parity", c14},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);

  std::cout.precision(3);
  bool all = true;
  for (int n : selected) {
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << n << "\n";
      return 2;
    }
    Outcome o;
    try {
      criteria[static_cast<std::size_t>(n - 1)].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << n << " " << criteria[static_cast<std::size_t>(n - 1)].first << ":"
              << o.detail.str() << std::endl;
  }
  return all ? 0 : 1;
}
