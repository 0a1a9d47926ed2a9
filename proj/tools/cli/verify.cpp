#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "qflow/qflow.hpp"

namespace qflow::cli {
namespace {

class Reporter {
 public:
  explicit Reporter(std::ostream& out) : out_(out) {}

  void check(const std::string& name, double delta, double tol) {
    const bool pass = std::isfinite(delta) && delta <= tol;
    ok_ = ok_ && pass;
    out_ << (pass ? "PASS  " : "FAIL  ") << name << "  delta=" << format_number(delta) << " tol=" << format_number(tol)
         << "\n";
  }
  void flag(const std::string& name, bool pass) {
    ok_ = ok_ && pass;
    out_ << (pass ? "PASS  " : "FAIL  ") << name << "\n";
  }
  void note(const std::string& name, const std::string& text) { out_ << "NOTE  " << name << "  " << text << "\n"; }
  bool ok() const { return ok_; }

 private:
  std::ostream& out_;
  bool ok_ = true;
};

Superoperator site_major(const KrausChannel& ch) { return site_major_reorder(channel_to_superop(ch)); }

TwoSiteRule random_rule(std::uint64_t seed, int n_kraus) {
  return make_two_site_rule(site_major(random_channel(seed, 2, 2, n_kraus)),
                            site_major(random_channel(seed + 1000, 2, 2, n_kraus)));
}

std::vector<std::pair<std::string, NamedRule>> zoo_at(double p) {
  const std::string tag = "@p=" + format_number(p);
  return {
      {"shift-right", NamedRule{RuleKind::shift, Side::right}},
      {"reset-left-swap" + tag, NamedRule{RuleKind::reset_swap, Side::left, p}},
      {"reset-right-swap" + tag, NamedRule{RuleKind::reset_swap, Side::right, p}},
      {"dephase-left-swap" + tag, NamedRule{RuleKind::dephase_swap, Side::left, p}},
      {"dephase-right-swap" + tag, NamedRule{RuleKind::dephase_swap, Side::right, p}},
      {"amplitude-damping-right" + tag, NamedRule{RuleKind::amplitude_damping, Side::right, p}},
      {"amplitude-damping-left" + tag, NamedRule{RuleKind::amplitude_damping, Side::left, p}},
      {"asymmetric-swap@p01=" + format_number(p) + ",p10=0.7",
       NamedRule{RuleKind::asymmetric_swap, Side::left, 0.0, p, 0.7}},
  };
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

void suite_unitary(Reporter& r) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MpoTensor m = rule_tensor(random_rule(seed, 1));
    const CurrentReport rep = evaluate_current(m);
    const std::string tag = "random-unitary seed=" + std::to_string(seed);
    r.check(tag + " |I|", std::abs(rep.current), 1e-9);
    double spec = 0.0;
    for (std::size_t i = 0; i < rep.singular_left.size(); ++i)
      spec = std::max(spec, std::abs(rep.singular_left[i] - rep.singular_right[i]));
    r.check(tag + " spectra(M_L) = spectra(M_R)", spec, 1e-8);
    const PartitionPair pp = partition(m);
    double mom = 0.0;
    for (int k = 1; k <= 4; ++k) mom = std::max(mom, rel(trace_moment(pp.m_left, k), trace_moment(pp.m_right, k)));
    r.check(tag + " moments k=1..4 (relative)", mom, 1e-8);
  }
}

void suite_moments(Reporter& r) {
  for (const auto& [name, spec] : zoo_at(0.5)) {
    const PartitionPair pp = partition(rule_mpo(spec));
    const auto [l, rr] = first_moment_check(pp);
    r.check(name + " Tr[M_L^dag M_L] = Tr[M_R^dag M_R] (relative)", rel(l, rr), 1e-9);
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PartitionPair pp = partition(rule_tensor(random_rule(seed, 2 + static_cast<int>(seed % 3))));
    const auto [l, rr] = first_moment_check(pp);
    r.check("random-noisy seed=" + std::to_string(seed) + " first moments (relative)", rel(l, rr), 1e-9);
  }
}

void suite_cjs(Reporter& r) {
  for (double p : {0.25, 0.5, 0.75}) {
    for (const auto& [name, spec] : zoo_at(p)) {
      if (spec.kind == RuleKind::shift && p != 0.25) continue;
      const Rule rule = make_rule(spec);
      const MpoTensor m = rule_mpo(spec);
      const double dense = evaluate_current(m).current;
      const double cjs = cjs_current(m);
      r.check(name + " dense vs CJS", std::abs(dense - cjs), 1e-9);
      if (const auto* two = std::get_if<TwoSiteRule>(&rule)) {
        const double fast = information_current_fast(two->w, rule_svd(*two));
        r.check(name + " dense vs fast", std::abs(dense - fast), 1e-9);
        r.check(name + " fast vs CJS", std::abs(fast - cjs), 1e-9);
      }
    }
  }
}

void suite_blocking(Reporter& r) {
  for (RuleKind k : {RuleKind::reset_swap, RuleKind::dephase_swap})
    for (Side s : {Side::left, Side::right}) {
      NamedRule spec{k, s, 0.5};
      const MpoTensor m = rule_mpo(spec);
      const double i1 = evaluate_current(m).current;
      const double i2 = evaluate_current(block(m, 2)).current;
      r.check(rule_name(k) + (s == Side::left ? " left" : " right") + " p=0.5 blocked n=2", std::abs(i1 - i2), 1e-9);
    }
  const MpoTensor sh = shift_tensor(2, Side::right);
  r.check("shift-right blocked n=2", std::abs(evaluate_current(block(sh, 2)).current - 2.0), 1e-9);
  for (double p : {0.1, 0.5, 0.9}) {
    const MpoTensor m = rule_mpo(NamedRule{RuleKind::amplitude_damping, Side::right, p});
    const double d = evaluate_current(block(m, 2)).current - evaluate_current(m).current;
    r.note("amplitude-damping-right p=" + format_number(p), "blocked-minus-unblocked=" + format_number(d));
  }
}

void suite_zoo(Reporter& r) {
  for (RuleKind k : {RuleKind::reset_swap, RuleKind::dephase_swap}) {
    double worst = 0.0, parity = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double p = i / 20.0;
      double sum = 0.0;
      for (Side s : {Side::left, Side::right}) {
        NamedRule spec{k, s, p};
        const double cur = evaluate_current(rule_mpo(spec)).current;
        worst = std::max(worst, std::abs(cur - *closed_form_current(spec, false)));
        sum += cur;
      }
      parity = std::max(parity, std::abs(sum));
    }
    r.check(rule_name(k) + " closed form, p=0..1 step 0.05", worst, 1e-9);
    r.check(rule_name(k) + " left + right = 0", parity, 1e-9);
  }
  r.check("reset-left-swap I(1) = -2",
          std::abs(evaluate_current(rule_mpo(NamedRule{RuleKind::reset_swap, Side::left, 1.0})).current + 2.0), 1e-9);
  r.check("dephase-left-swap I(1) = -1",
          std::abs(evaluate_current(rule_mpo(NamedRule{RuleKind::dephase_swap, Side::left, 1.0})).current + 1.0), 1e-9);
  double comp = 0.0;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    NamedRule spec{RuleKind::reset_swap, Side::left, p};
    comp = std::max(comp, std::abs(evaluate_current(compose(rule_mpo(spec), 2)).current - *closed_form_current(spec, true)));
  }
  r.check("reset-left-swap composed n=2 vs printed I_c", comp, 1e-9);
  {
    NamedRule spec{RuleKind::dephase_swap, Side::left, 0.5};
    const double d = evaluate_current(compose(rule_mpo(spec), 2)).current - *closed_form_current(spec, true);
    r.note("dephase-left-swap composed n=2 p=0.5", "numeric-minus-printed I_c=" + format_number(d) +
                                                      " (printed I_c not reproduced; see README)");
  }
  const MpoTensor sh = shift_tensor(2, Side::right);
  r.check("shift-right I = 2", std::abs(evaluate_current(sh).current - 2.0), 1e-9);
  r.check("shift-right composed n=2 I = 4", std::abs(evaluate_current(compose(sh, 2)).current - 4.0), 1e-9);

  double prev = -1.0, worst_drop = 0.0;
  for (int i = 0; i <= 9; ++i) {
    const double cur = evaluate_current(rule_mpo(NamedRule{RuleKind::amplitude_damping, Side::right, i / 10.0})).current;
    if (i == 0) r.check("amplitude-damping I(0) = 0", std::abs(cur), 1e-9);
    else worst_drop = std::max(worst_drop, prev - cur);
    prev = cur;
  }
  r.check("amplitude-damping non-decreasing, p=0..0.9", std::max(0.0, worst_drop), 1e-12);

  double asym = 0.0;
  bool sym = true;
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      NamedRule spec{RuleKind::asymmetric_swap, Side::left, 0.0, a / 4.0, b / 4.0};
      asym = std::max(asym, std::abs(evaluate_current(rule_mpo(spec)).current));
      const TwoSiteRule two = std::get<TwoSiteRule>(make_rule(spec));
      sym = sym && swap_symmetry_check(two.v, two.w, 1e-10, x);
    }
  r.check("asymmetric-swap I = 0 on 5x5 grid", asym, 1e-9);
  r.flag("asymmetric-swap swap-symmetric in the X1X2 frame", sym);

  bool sep = separability_rank(std::get<TwoSiteRule>(make_rule(NamedRule{RuleKind::amplitude_damping, Side::right, 0.0})).w) == 1;
  for (int i = 1; i <= 10; ++i)
    sep = sep && separability_rank(std::get<TwoSiteRule>(
                     make_rule(NamedRule{RuleKind::amplitude_damping, Side::right, i / 10.0})).w) == 4;
  r.flag("amplitude-damping W^dag W coefficient rank 1 at p=0, 4 for p>0", sep);

  double lv = 0.0;
  for (double p : {0.1, 0.5, 0.9}) {
    NamedRule spec{RuleKind::amplitude_damping, Side::right, p};
    const ComplexMatrix a = liouvillian_superop(make_liouvillian(spec)).matrix();
    const ComplexMatrix b = channel_to_superop(amplitude_damping_channel(p, Side::right)).matrix();
    lv = std::max(lv, (a - b).cwiseAbs().maxCoeff());
  }
  r.check("amplitude-damping Liouvillian vs Kraus", lv, 1e-10);
}

}  // namespace

bool run_verify_suite(const std::string& suite, std::ostream& out) {
  Reporter r(out);
  const bool all = suite == "all";
  if (all || suite == "unitary") suite_unitary(r);
  if (all || suite == "moments") suite_moments(r);
  if (all || suite == "cjs") suite_cjs(r);
  if (all || suite == "blocking") suite_blocking(r);
  if (all || suite == "zoo") suite_zoo(r);
  out << (r.ok() ? "verify: all checks passed\n" : "verify: FAILURES\n");
  return r.ok();
}

}  // namespace qflow::cli
