#pragma once

#include <optional>
#include <string>
#include <variant>

#include "qflow/channels.hpp"
#include "qflow/mpo.hpp"

namespace qflow {

enum class RuleKind { shift, reset_swap, dephase_swap, amplitude_damping, asymmetric_swap };

struct NamedRule {
  RuleKind kind = RuleKind::reset_swap;
  Side side = Side::left;  // shift direction, noisy site, or damping direction
  double p = 0.0;
  double p01 = 0.0;
  double p10 = 0.0;
  int d = 2;
};

using Rule = std::variant<TwoSiteRule, MpoTensor>;

void validate(const NamedRule& spec);

// Printed Kraus operators (4x4 ones in the |00>,|01>,|10>,|11> basis).
KrausChannel reset_channel(double p);
KrausChannel dephase_channel(double p);
KrausChannel amplitude_damping_channel(double p, Side direction);
KrausChannel asymmetric_swap_channel(double p01, double p10);

Rule make_rule(const NamedRule& spec);
MpoTensor rule_mpo(const NamedRule& spec, const SvdOptions& options = {});

std::optional<double> closed_form_current(const NamedRule& spec, bool composed);

// Throws InvalidArgument for p = 1 (divergent rate).
Liouvillian make_liouvillian(const NamedRule& spec);

NamedRule mirrored(const NamedRule& spec);

std::string rule_name(RuleKind kind);
std::optional<RuleKind> parse_rule_kind(const std::string& name);

}  // namespace qflow
