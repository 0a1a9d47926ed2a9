#include "qflow/zoo.hpp"

#include <cmath>
#include <string>

#include "qflow/errors.hpp"

namespace qflow {
namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0,1]");
}

// V = SWAP (K (x) 1) or SWAP (1 (x) K), built from Kraus operators, with the
// unitary core / local channel factorization attached.
TwoSiteRule swap_after_local(const KrausChannel& local, Side side) {
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  ComplexMatrix sw = ComplexMatrix::Zero(4, 4);
  sw(0, 0) = sw(1, 2) = sw(2, 1) = sw(3, 3) = 1.0;
  std::vector<ComplexMatrix> ops;
  for (const auto& k : local.kraus_ops()) ops.push_back(sw * (side == Side::left ? kron(k, id2) : kron(id2, k)));
  const Superoperator v = site_major_reorder(channel_to_superop(KrausChannel(2, 2, std::move(ops))));
  const ComplexMatrix r = channel_to_superop(local).matrix();
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  TwoSiteRule rule = make_two_site_rule(v, v);
  rule.v_factors = GateFactorization{swap_superop(2), side == Side::left ? r : id, side == Side::left ? id : r};
  return rule;
}

TwoSiteRule direct_rule(const KrausChannel& ch) {
  const Superoperator v = site_major_reorder(channel_to_superop(ch));
  return make_two_site_rule(v, v);
}

double lg(double x) { return std::log2(x); }

}  // namespace

void validate(const NamedRule& spec) {
  if (spec.kind == RuleKind::shift) {
    if (spec.d < 2) throw InvalidArgument("shift: d must be >= 2");
    return;
  }
  if (spec.d != 2) throw InvalidArgument(rule_name(spec.kind) + ": only d = 2 is defined");
  if (spec.kind == RuleKind::asymmetric_swap) {
    check_probability(spec.p01, "p01");
    check_probability(spec.p10, "p10");
  } else {
    check_probability(spec.p, "p");
  }
}

KrausChannel reset_channel(double p) {
  check_probability(p, "p");
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2), k1 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - p);
  k1(0, 1) = std::sqrt(p);
  return KrausChannel(2, 1, {k0, k1});
}

KrausChannel dephase_channel(double p) {
  check_probability(p, "p");
  ComplexMatrix k0 = std::sqrt(1.0 - p / 2.0) * ComplexMatrix::Identity(2, 2);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 0) = std::sqrt(p / 2.0);
  k1(1, 1) = -std::sqrt(p / 2.0);
  return KrausChannel(2, 1, {k0, k1});
}

KrausChannel amplitude_damping_channel(double p, Side direction) {
  check_probability(p, "p");
  ComplexMatrix k0 = ComplexMatrix::Identity(4, 4), k1 = ComplexMatrix::Zero(4, 4);
  // right: |01> -> |00>;  left: |10> -> |00>
  const Index src = direction == Side::right ? 1 : 2;
  k0(src, src) = std::sqrt(1.0 - p);
  k1(0, src) = std::sqrt(p);
  return KrausChannel(2, 2, {k0, k1});
}

KrausChannel asymmetric_swap_channel(double p01, double p10) {
  check_probability(p01, "p01");
  check_probability(p10, "p10");
  ComplexMatrix k0 = ComplexMatrix::Identity(4, 4), k1 = ComplexMatrix::Zero(4, 4);
  k0(1, 1) = std::sqrt(1.0 - p01);
  k0(2, 2) = std::sqrt(1.0 - p10);
  k1(1, 2) = std::sqrt(p10);
  k1(2, 1) = std::sqrt(p01);
  return KrausChannel(2, 2, {k0, k1});
}

Rule make_rule(const NamedRule& spec) {
  validate(spec);
  switch (spec.kind) {
    case RuleKind::shift:
      return shift_tensor(spec.d, spec.side);
    case RuleKind::reset_swap:
      return swap_after_local(reset_channel(spec.p), spec.side);
    case RuleKind::dephase_swap:
      return swap_after_local(dephase_channel(spec.p), spec.side);
    case RuleKind::amplitude_damping:
      return direct_rule(amplitude_damping_channel(spec.p, spec.side));
    case RuleKind::asymmetric_swap:
      return direct_rule(asymmetric_swap_channel(spec.p01, spec.p10));
  }
  throw InvalidArgument("make_rule: unknown rule kind");
}

MpoTensor rule_mpo(const NamedRule& spec, const SvdOptions& options) {
  Rule r = make_rule(spec);
  if (auto* t = std::get_if<MpoTensor>(&r)) return *t;
  return rule_tensor(std::get<TwoSiteRule>(r), options);
}

std::optional<double> closed_form_current(const NamedRule& spec, bool composed) {
  validate(spec);
  const double sign = spec.side == Side::left ? 1.0 : -1.0;
  const double p = spec.p;
  switch (spec.kind) {
    case RuleKind::shift: {
      const double i = lg(double(spec.d) * spec.d);
      return (spec.side == Side::right ? 1.0 : -1.0) * (composed ? 2.0 * i : i);
    }
    case RuleKind::reset_swap: {
      const double p2 = p * p, p3 = p2 * p, p4 = p3 * p, p5 = p4 * p, p6 = p5 * p;
      const double i = 2.0 * lg((p2 / 2.0 - p + 1.0) / (p2 - p + 1.0));
      if (!composed) return sign * i;
      const double xi = (p2 - p + 1.0) * (p4 - 4.0 * p3 + 5.0 * p2 - 2.0 * p + 1.0) /
                        (p6 - 6.0 * p5 + 15.0 * p4 - 19.0 * p3 + 12.0 * p2 - 3.0 * p + 1.0);
      return sign * (2.0 * i + 2.0 * lg(xi));
    }
    case RuleKind::dephase_swap: {
      const double p2 = p * p, p3 = p2 * p, p4 = p3 * p, p5 = p4 * p, p6 = p5 * p, p7 = p6 * p, p8 = p7 * p;
      const double h = p2 / 2.0 - p + 1.0;
      const double i = lg(2.0 * h * h / (p4 - 4.0 * p3 + 6.0 * p2 - 4.0 * p + 2.0));
      if (!composed) return sign * i;
      const double a = p4 - 4.0 * p3 + 5.0 * p2 - 2.0 * p + 1.0;
      const double xi = a * a / (p8 - 8.0 * p7 + 28.0 * p6 - 56.0 * p5 + 69.0 * p4 - 52.0 * p3 + 22.0 * p2 - 4.0 * p + 1.0);
      return sign * (2.0 * i + 2.0 * lg(xi));
    }
    case RuleKind::amplitude_damping:
    case RuleKind::asymmetric_swap:
      return std::nullopt;
  }
  return std::nullopt;
}

Liouvillian make_liouvillian(const NamedRule& spec) {
  validate(spec);
  auto rate = [](double p, const char* name) {
    if (p >= 1.0) {
      throw InvalidArgument(std::string(name) + " = 1 gives a divergent rate -ln(1-p); use the Kraus form instead");
    }
    return std::sqrt(-std::log(1.0 - p));
  };
  Liouvillian l;
  l.site_dim = 2;
  l.arity = 2;
  if (spec.kind == RuleKind::amplitude_damping) {
    const Index src = spec.side == Side::right ? 1 : 2;
    ComplexMatrix j = ComplexMatrix::Zero(4, 4);
    j(0, src) = rate(spec.p, "p");
    l.jump_ops.push_back(j);
    return l;
  }
  if (spec.kind == RuleKind::asymmetric_swap) {
    ComplexMatrix j1 = ComplexMatrix::Zero(4, 4), j2 = ComplexMatrix::Zero(4, 4);
    j1(2, 1) = rate(spec.p01, "p01");
    j2(1, 2) = rate(spec.p10, "p10");
    l.jump_ops = {j1, j2};
    return l;
  }
  throw InvalidArgument("make_liouvillian: only amplitude-damping and asymmetric-swap have a Liouvillian");
}

NamedRule mirrored(const NamedRule& spec) {
  NamedRule out = spec;
  out.side = opposite(spec.side);
  if (spec.kind == RuleKind::asymmetric_swap) std::swap(out.p01, out.p10);
  return out;
}

std::string rule_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::shift: return "shift";
    case RuleKind::reset_swap: return "reset-swap";
    case RuleKind::dephase_swap: return "dephase-swap";
    case RuleKind::amplitude_damping: return "amplitude-damping";
    case RuleKind::asymmetric_swap: return "asymmetric-swap";
  }
  return "unknown";
}

std::optional<RuleKind> parse_rule_kind(const std::string& name) {
  for (RuleKind k : {RuleKind::shift, RuleKind::reset_swap, RuleKind::dephase_swap, RuleKind::amplitude_damping,
                     RuleKind::asymmetric_swap}) {
    if (rule_name(k) == name) return k;
  }
  return std::nullopt;
}

}  // namespace qflow
