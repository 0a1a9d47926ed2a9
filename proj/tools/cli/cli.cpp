#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qflow/qflow.hpp"

namespace qflow::cli {
namespace {

struct RuleChoice {
  RuleKind kind;
  std::optional<Side> side;
};

std::optional<RuleChoice> parse_rule(const std::string& name) {
  if (auto k = parse_rule_kind(name)) return RuleChoice{*k, std::nullopt};
  const std::pair<const char*, RuleChoice> aliases[] = {
      {"shift-left", {RuleKind::shift, Side::left}},
      {"shift-right", {RuleKind::shift, Side::right}},
      {"reset-left-swap", {RuleKind::reset_swap, Side::left}},
      {"reset-right-swap", {RuleKind::reset_swap, Side::right}},
      {"dephase-left-swap", {RuleKind::dephase_swap, Side::left}},
      {"dephase-right-swap", {RuleKind::dephase_swap, Side::right}},
      {"amplitude-damping-left", {RuleKind::amplitude_damping, Side::left}},
      {"amplitude-damping-right", {RuleKind::amplitude_damping, Side::right}},
  };
  for (const auto& [alias, choice] : aliases)
    if (name == alias) return choice;
  return std::nullopt;
}

std::optional<Side> parse_side(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  return std::nullopt;
}

struct PipelineOptions {
  int block_n = 1;
  int compose_n = 1;
  double rank_tol = kDefaultRankTolerance;
};

MpoTensor apply_grid(MpoTensor m, const PipelineOptions& o) {
  if (o.block_n > 1) m = block(m, o.block_n);
  if (o.compose_n > 1) m = compose(m, o.compose_n);
  return m;
}

std::optional<double> grid_closed_form(const NamedRule& spec, const PipelineOptions& o) {
  if (spec.kind == RuleKind::shift) {
    return *closed_form_current(spec, false) * o.compose_n;
  }
  if (o.compose_n == 1) return closed_form_current(spec, false);
  if (o.compose_n == 2 && o.block_n == 1) return closed_form_current(spec, true);
  return std::nullopt;
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }
std::string opt_integer(const std::optional<Index>& v) { return v ? std::to_string(*v) : std::string(); }

constexpr const char* kCsvHeader = "p,current,index,closed_form,s2_left,s2_right,rank_left,rank_right";

std::string csv_row(const std::string& p, const CurrentReport& r, const std::optional<double>& closed) {
  std::ostringstream os;
  os << p << ',' << format_number(r.current) << ',' << opt_number(r.index) << ',' << opt_number(closed) << ','
     << format_number(r.s2_left) << ',' << format_number(r.s2_right) << ',' << opt_integer(r.rank_left) << ','
     << opt_integer(r.rank_right);
  return os.str();
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw InvalidArgument("--p-step must be > 0");
  if (stop < start) throw InvalidArgument("--p-stop must be >= --p-start");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid;
  for (long i = 0; i < n; ++i) {
    double p = start + static_cast<double>(i) * step;
    if (p > stop) p = stop;
    grid.push_back(p);
  }
  return grid;
}

void check_tolerance(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw InvalidArgument("--rank-tol must lie in (0,1)");
}

TwoSiteRule rule_from_document(const ChannelDocument& doc) {
  if (doc.v.arity() != 2) throw InvalidArgument("channel file: V must act on two sites (arity 2)");
  const Superoperator v = site_major_reorder(channel_to_superop(doc.v));
  if (!doc.w) return make_two_site_rule(v, v);
  if (doc.w->arity() != 2) throw InvalidArgument("channel file: W must act on two sites (arity 2)");
  if (doc.w->site_dim() != doc.v.site_dim()) throw InvalidArgument("channel file: V and W site dimensions differ");
  return make_two_site_rule(v, site_major_reorder(channel_to_superop(*doc.w)));
}

struct SweepArgs {
  std::string rule;
  std::optional<std::string> side;
  double p_start = 0.0;
  std::optional<double> p_stop;
  double p_step = 0.1;
  std::optional<double> p01;
  double p10 = 0.0;
  int d = 2;
  PipelineOptions pipe;
  std::string out;
  std::string channel_file;
  int jobs = 1;
};

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file " + path);
  f << text;
  if (!f) throw InvalidArgument("failed writing output file " + path);
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  check_tolerance(a.pipe.rank_tol);
  std::string text = std::string(kCsvHeader) + "\n";
  if (!a.channel_file.empty()) {
    if (!a.rule.empty()) throw InvalidArgument("--rule and --channel-file are mutually exclusive");
    const TwoSiteRule rule = rule_from_document(load_channel_file(a.channel_file));
    const MpoTensor m = apply_grid(rule_tensor(rule), a.pipe);
    text += csv_row("", evaluate_current(m, {a.pipe.rank_tol}), std::nullopt) + "\n";
    write_output(a.out, text, out);
    return kOk;
  }
  if (a.rule.empty()) throw InvalidArgument("sweep needs --rule or --channel-file");
  const auto choice = parse_rule(a.rule);
  if (!choice) throw InvalidArgument("unknown rule '" + a.rule + "'");
  NamedRule base;
  base.kind = choice->kind;
  base.side = choice->side.value_or(base.kind == RuleKind::shift ? Side::right : Side::left);
  if (a.side) {
    const auto s = parse_side(*a.side);
    if (!s) throw InvalidArgument("--side must be left or right");
    if (choice->side && *choice->side != *s) throw InvalidArgument("--side contradicts the rule name");
    base.side = *s;
  }
  base.d = a.d;
  base.p10 = a.p10;

  std::vector<double> grid;
  if (base.kind == RuleKind::asymmetric_swap && a.p01) {
    grid = {*a.p01};
  } else {
    grid = make_grid(a.p_start, a.p_stop.value_or(a.p_start), a.p_step);
  }
  std::vector<NamedRule> specs;
  for (double p : grid) {
    NamedRule s = base;
    if (s.kind == RuleKind::asymmetric_swap) s.p01 = p;
    else s.p = p;
    validate(s);
    specs.push_back(s);
  }
  // resource cap is checked before any heavy work
  (void)apply_grid(rule_mpo(specs.front()), a.pipe);

  std::vector<std::string> rows(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
  auto work = [&](std::size_t i) {
    try {
      const MpoTensor m = apply_grid(rule_mpo(specs[i]), a.pipe);
      const CurrentReport r = evaluate_current(m, {a.pipe.rank_tol});
      rows[i] = csv_row(format_number(grid[i]), r, grid_closed_form(specs[i], a.pipe));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, a.jobs));
  if (jobs == 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < specs.size(); i += jobs) work(i);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (const auto& r : rows) text += r + "\n";
  write_output(a.out, text, out);
  return kOk;
}

int cmd_custom(const std::string& path, const PipelineOptions& pipe, const std::string& csv_out, std::ostream& out) {
  check_tolerance(pipe.rank_tol);
  const ChannelDocument doc = load_channel_file(path);
  const TwoSiteRule rule = rule_from_document(doc);
  const OperatorSvd svd = rule_svd(rule, SvdOptions{OperatorBasis::hermitian_preserving, pipe.rank_tol});
  const MpoTensor m = apply_grid(build_local_tensor(rule.w, svd), pipe);
  const CurrentReport r = evaluate_current(m, {pipe.rank_tol});
  auto line = [&](const char* key, const std::string& value) { out << key << " = " << value << "\n"; };
  line("site_dim", std::to_string(rule.v.site_dim()));
  line("bond_dim", std::to_string(svd.chi));
  line("block", std::to_string(pipe.block_n));
  line("compose", std::to_string(pipe.compose_n));
  line("current", format_number(r.current));
  line("current_ratio", format_number(r.current_ratio));
  line("index", r.index ? format_number(*r.index) : "unavailable");
  line("s2_left", format_number(r.s2_left));
  line("s2_right", format_number(r.s2_right));
  line("trace_moment1_left", format_number(r.trace_moment1_left));
  line("trace_moment1_right", format_number(r.trace_moment1_right));
  line("trace_moment2_left", format_number(r.trace_moment2_left));
  line("trace_moment2_right", format_number(r.trace_moment2_right));
  line("rank_left", r.rank_left ? std::to_string(*r.rank_left) : "unavailable");
  line("rank_right", r.rank_right ? std::to_string(*r.rank_right) : "unavailable");
  if (pipe.block_n == 1 && pipe.compose_n == 1) line("current_fast", format_number(information_current_fast(rule.w, svd)));
  line("separability_rank", std::to_string(separability_rank(rule.w, pipe.rank_tol)));
  line("swap_symmetric", swap_symmetry_check(rule.v, rule.w, 1e-10) ? "true" : "false");
  if (rule.v.site_dim() == 2) {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    line("swap_symmetric_x_frame", swap_symmetry_check(rule.v, rule.w, 1e-10, x) ? "true" : "false");
  }
  if (!csv_out.empty()) {
    write_output(csv_out, std::string(kCsvHeader) + "\n" + csv_row("", r, std::nullopt) + "\n", out);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information current and rank-ratio index of one-dimensional quantum cellular automata", "qflow"};
  app.require_subcommand(1);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Evaluate a rule over a parameter grid and write CSV");
  sweep->add_option("--rule", sw.rule, "shift | reset-swap | dephase-swap | amplitude-damping | asymmetric-swap");
  sweep->add_option("--side", sw.side, "left | right");
  sweep->add_option("--p-start", sw.p_start, "First grid value");
  sweep->add_option("--p-stop", sw.p_stop, "Last grid value (defaults to --p-start)");
  sweep->add_option("--p-step", sw.p_step, "Grid spacing");
  sweep->add_option("--p01", sw.p01, "asymmetric-swap: fixes p01 (otherwise swept over the grid)");
  sweep->add_option("--p10", sw.p10, "asymmetric-swap: p10");
  sweep->add_option("--d", sw.d, "Site dimension (shift only)");
  sweep->add_option("--block", sw.pipe.block_n, "Blocking factor")->check(CLI::PositiveNumber);
  sweep->add_option("--compose", sw.pipe.compose_n, "Number of composed updates")->check(CLI::PositiveNumber);
  sweep->add_option("--rank-tol", sw.pipe.rank_tol, "Relative rank tolerance");
  sweep->add_option("--out", sw.out, "Output CSV path (default stdout)");
  sweep->add_option("--channel-file", sw.channel_file, "JSON channel file instead of --rule");
  sweep->add_option("--jobs", sw.jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run invariant suites");
  verify->add_option("--suite", suite, "all | unitary | moments | cjs | blocking | zoo");

  std::string custom_path, custom_out;
  PipelineOptions custom_pipe;
  auto* custom = app.add_subcommand("custom", "Report for a user-supplied channel file");
  custom->add_option("--channel-file", custom_path, "JSON channel file")->required();
  custom->add_option("--block", custom_pipe.block_n, "Blocking factor")->check(CLI::PositiveNumber);
  custom->add_option("--compose", custom_pipe.compose_n, "Number of composed updates")->check(CLI::PositiveNumber);
  custom->add_option("--rank-tol", custom_pipe.rank_tol, "Relative rank tolerance");
  custom->add_option("--out", custom_out, "Optional CSV path");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*sweep) return cmd_sweep(sw, out);
    if (*custom) return cmd_custom(custom_path, custom_pipe, custom_out, out);
    if (*verify) {
      static const char* const known[] = {"all", "unitary", "moments", "cjs", "blocking", "zoo"};
      if (std::find(std::begin(known), std::end(known), suite) == std::end(known)) {
        throw InvalidArgument("unknown suite '" + suite + "'");
      }
      return run_verify_suite(suite, out) ? kOk : kVerificationFailed;
    }
  } catch (const ResourceCapExceeded& e) {
    err << "resource cap: " << e.what() << "\n";
    return kResourceCap;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvalidArgument& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace qflow::cli
