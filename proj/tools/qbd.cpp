// qbd: command line front end for the swallow-tail QBD library.
//
// Exit codes: 0 success (including expected-negative answers such as a
// transient chain), 1 verification failure, 2 usage error, 3 domain error.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qbd/block_operator.hpp"
#include "qbd/errors.hpp"
#include "qbd/export.hpp"
#include "qbd/geometry.hpp"
#include "qbd/quadrature.hpp"
#include "qbd/recurrence.hpp"
#include "qbd/simulation.hpp"
#include "qbd/special_functions.hpp"
#include "qbd/spectral.hpp"
#include "qbd/stochastic.hpp"

namespace {

using namespace qbd;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double alpha = 0, beta = 0, gamma = 0;
  double tau = std::numeric_limits<double>::quiet_NaN();
  int levels = -1;
  int order = -1;
  std::uint64_t seed = 0;
  int steps = -1;
  std::uint64_t reps = 0;
  unsigned threads = 1;
  std::string state = "0,0";
  std::string format = "json";
  std::string out;
  std::string family = "all";
  std::string kind = "P";
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  bool strict = false;
  bool expect_stochastic = false;

  [[nodiscard]] bool has_tau() const { return !std::isnan(tau); }
  [[nodiscard]] int levels_or(int d) const { return levels < 0 ? d : levels; }
  [[nodiscard]] int order_or(int d) const { return order < 0 ? d : order; }
  [[nodiscard]] int steps_or(int d) const { return steps < 0 ? d : steps; }
  [[nodiscard]] std::uint64_t reps_or(std::uint64_t d) const { return reps == 0 ? d : reps; }
  [[nodiscard]] double tol_or(double d) const { return std::isnan(tolerance) ? d : tolerance; }
  [[nodiscard]] bool csv() const { return format == "csv"; }

  [[nodiscard]] ModelParameters params() const {
    if (has_tau()) return ModelParameters::make(alpha, beta, gamma, tau);
    return ModelParameters::make(alpha, beta, gamma);
  }
  [[nodiscard]] ModelParameters params_with_tau(double fallback) const {
    return ModelParameters::make(alpha, beta, gamma, has_tau() ? tau : fallback);
  }
  [[nodiscard]] ModelParameters params_requiring_tau() const {
    if (!has_tau()) throw UsageError("this subcommand needs --tau");
    return params();
  }
};

ChainState parse_state(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError("--state expects n,k");
  ChainState st;
  auto parse_int = [&](std::string_view part, int& out) {
    const auto r = std::from_chars(part.data(), part.data() + part.size(), out);
    if (r.ec != std::errc() || r.ptr != part.data() + part.size())
      throw UsageError("--state expects n,k");
  };
  const std::string_view sv(s);
  parse_int(sv.substr(0, comma), st.level);
  parse_int(sv.substr(comma + 1), st.phase);
  if (st.level < 0 || st.phase < 0 || st.phase > st.level)
    throw DomainError("--state needs 0 <= k <= n");
  return st;
}

OperatorKind parse_kind(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto k : {OperatorKind::J1, OperatorKind::J2, OperatorKind::P, OperatorKind::J1_TILDE,
                 OperatorKind::J2_TILDE, OperatorKind::GENERATOR_CANDIDATE})
    if (name(k) == s) return k;
  if (s == "GENERATOR") return OperatorKind::GENERATOR_CANDIDATE;
  throw UsageError("unknown --kind " + s);
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw UsageError("cannot open --out " + cfg.out);
  f << text;
}

void emit_json(const RunConfig& cfg, const json& j) { emit(cfg, j.dump(2) + "\n"); }

json header(std::string_view command, const ModelParameters& p) {
  json j = report_header(command);
  j["params"] = to_json(p);
  return j;
}

// ---- subcommands -----------------------------------------------------------

int cmd_coeffs(const RunConfig& cfg) {
  const auto p = cfg.params();
  const int N = cfg.levels_or(5);
  std::vector<std::string> families;
  if (cfg.family == "all") {
    for (auto w : {CoeffU::a, CoeffU::b, CoeffU::c, CoeffU::d, CoeffU::e})
      families.emplace_back(name(w));
    for (auto w : {CoeffV::a1, CoeffV::a2, CoeffV::a3, CoeffV::b1, CoeffV::b2, CoeffV::b3,
                   CoeffV::c1, CoeffV::c2, CoeffV::c3})
      families.emplace_back(name(w));
  } else {
    if (!parse_coeff_u(cfg.family) && !parse_coeff_v(cfg.family))
      throw UsageError("unknown --family " + cfg.family);
    families.push_back(cfg.family);
  }

  if (cfg.csv()) {
    std::ostringstream os;
    if (families.size() == 1) {
      write_coefficient_csv(os, families.front(), N, p);
    } else {
      os << "family,n,k,value\n";
      for (const auto& f : families) {
        std::ostringstream one;
        write_coefficient_csv(one, f, N, p);
        std::string line;
        std::istringstream in(one.str());
        std::getline(in, line);
        while (std::getline(in, line)) os << f << ',' << line << '\n';
      }
    }
    emit(cfg, os.str());
    return kExitOk;
  }

  json j = header("coeffs", p);
  j["levels"] = N;
  json table = json::object();
  for (const auto& f : families) {
    json rows = json::array();
    const auto u = parse_coeff_u(f);
    const auto v = parse_coeff_v(f);
    for (int n = 0; n <= N; ++n) {
      const PhaseRange r = u ? phase_range(n, *u) : phase_range(n, *v);
      for (int k = std::max(r.lo, 0); k <= r.hi; ++k)
        rows.push_back({{"n", n}, {"k", k}, {"value", u ? coeff_u(n, k, *u, p) : coeff_v(n, k, *v, p)}});
    }
    table[f] = std::move(rows);
  }
  j["coefficients"] = std::move(table);
  emit_json(cfg, j);
  return kExitOk;
}

int cmd_build(const RunConfig& cfg) {
  const auto kind = parse_kind(cfg.kind);
  const auto p = kind == OperatorKind::P ? cfg.params_requiring_tau() : cfg.params();
  const int N = cfg.levels_or(3);
  const auto op = build_operator(kind, N, p);
  if (cfg.csv()) {
    const Eigen::MatrixXd M = op.to_dense();
    std::vector<ChainState> states;
    for (int n = 0; n <= N; ++n)
      for (int k = 0; k <= n; ++k) states.push_back({n, k});
    std::ostringstream os;
    os << "from_level,from_phase,to_level,to_phase,value\n";
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index c = 0; c < M.cols(); ++c)
        if (M(i, c) != 0)
          os << states[i].level << ',' << states[i].phase << ',' << states[c].level << ','
             << states[c].phase << ',' << format_double(M(i, c)) << '\n';
    emit(cfg, os.str());
    return kExitOk;
  }
  json j = header("build", p);
  j["operator"] = to_json(op);
  emit_json(cfg, j);
  return kExitOk;
}

int cmd_check_stochastic(const RunConfig& cfg) {
  const auto p = cfg.params_requiring_tau();
  const int N = cfg.levels_or(15);
  ValidationOptions opts;
  opts.tolerance = cfg.tol_or(opts.tolerance);
  opts.strict = cfg.strict;
  const auto P = build_P(p, N);
  const auto violations = validate_stochastic(P, opts);
  const bool failed = cfg.expect_stochastic && !violations.empty();

  if (cfg.csv()) {
    std::ostringstream os;
    os << "level,block,row,column,value,inequality\n";
    for (const auto& v : violations)
      os << v.level << ',' << v.block << ',' << v.row << ',' << v.column << ','
         << format_double(v.value) << ",\"" << inequality_text(v.family) << "\"\n";
    emit(cfg, os.str());
    return failed ? kExitVerification : kExitOk;
  }
  json j = header("check-stochastic", p);
  j["levels"] = N;
  j["strict"] = opts.strict;
  j["tolerance"] = opts.tolerance;
  j["region"] = to_json(classify_region(p));
  j["stochastic"] = violations.empty();
  j["violation_count"] = violations.size();
  j["violations"] = to_json(violations);
  j["smallest_entry"] = to_json(smallest_entry(P));
  emit_json(cfg, j);
  return failed ? kExitVerification : kExitOk;
}

int cmd_tau_bounds(const RunConfig& cfg) {
  const auto p = cfg.params();
  const auto r = classify_region(p);
  json j = header("tau-bounds", p);
  j.update(to_json(r));
  json c = json::object();
  auto put = [&](const char* key, double x) {
    try {
      c[key] = tau_bound_constant(x, p);
    } catch (const PoleError&) {
      c[key] = nullptr;
    }
  };
  put("C_-1/2", -0.5);
  put("C_1/2", 0.5);
  put("C_gamma", p.gamma);
  put("C_gamma+1", p.gamma + 1);
  j["constants"] = std::move(c);
  emit_json(cfg, j);
  return kExitOk;
}

int cmd_km_verify(const RunConfig& cfg) {
  const auto base = cfg.params();
  const int L = cfg.levels_or(3);
  const int S = cfg.steps_or(4);
  const int order = cfg.order_or(32);
  const double tol = cfg.tol_or(1e-6);
  if (L < 0 || S < 0) throw UsageError("--levels and --steps must be nonnegative");

  std::vector<double> taus;
  if (cfg.has_tau()) {
    taus.push_back(cfg.tau);
  } else {
    if (cfg.csv()) throw UsageError("csv output of km-verify needs a single --tau");
    taus = {0.0, 0.5, classify_region(base).tau_max};
  }

  // Paths that leave the truncation cannot come back within S steps.
  const int N = std::max(12, L + S + 1);
  std::vector<KmComparison> all;
  json runs = json::array();
  bool ok = true;
  for (double t : taus) {
    const auto p = base.with_tau(t);
    const KarlinMcGregor km(p, L, S, order);
    const Eigen::MatrixXd P = build_P(p, N).to_dense();
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(P.rows(), P.cols());
    double worst = 0;
    for (int s = 0; s <= S; ++s) {
      for (int li = 0; li <= L; ++li)
        for (int pi = 0; pi <= li; ++pi)
          for (int lj = 0; lj <= L; ++lj)
            for (int pj = 0; pj <= lj; ++pj) {
              KmComparison c{li, pi, lj, pj, s, km.transition(li, pi, lj, pj, s),
                             power(BlockTridiagonalOperator::state_index(li, pi),
                                   BlockTridiagonalOperator::state_index(lj, pj))};
              worst = std::max(worst, c.abs_diff());
              all.push_back(c);
            }
      power = power * P;
    }
    const bool pass = worst <= tol;
    ok = ok && pass;
    runs.push_back({{"tau", t}, {"max_abs_diff", worst}, {"pass", pass}});
  }

  if (cfg.csv()) {
    std::ostringstream os;
    write_km_csv(os, all);
    emit(cfg, os.str());
  } else {
    json j = header("km-verify", base);
    j["levels"] = L;
    j["steps"] = S;
    j["order"] = order;
    j["truncation"] = N;
    j["tolerance"] = tol;
    j["runs"] = std::move(runs);
    j["pass"] = ok;
    emit_json(cfg, j);
  }
  return ok ? kExitOk : kExitVerification;
}

int cmd_invariant(const RunConfig& cfg) {
  const auto p = cfg.params_with_tau(0.0);
  const int N = cfg.levels_or(15);
  const double tol = cfg.tol_or(1e-10);
  const Eigen::VectorXd pi = invariant_measure(p, N);
  const Eigen::VectorXd piP = build_P(p, N).apply_left(pi);
  // The last level misses its A_N inflow, so only levels below N are checked.
  double residual = 0;
  for (Eigen::Index s = 0; s < BlockTridiagonalOperator::num_states(N - 1); ++s)
    residual = std::max(residual, std::abs(piP(s) - pi(s)) / std::abs(pi(s)));
  const bool ok = residual <= tol;

  if (cfg.csv()) {
    std::ostringstream os;
    os << "level,phase,pi\n";
    for (int n = 0; n <= N; ++n)
      for (int k = 0; k <= n; ++k)
        os << n << ',' << k << ','
           << format_double(pi(BlockTridiagonalOperator::state_index(n, k))) << '\n';
    emit(cfg, os.str());
  } else {
    json j = header("invariant", p);
    j["levels"] = N;
    json entries = json::array();
    for (int n = 0; n <= N; ++n)
      for (int k = 0; k <= n; ++k)
        entries.push_back(
            {{"n", n}, {"k", k}, {"pi", pi(BlockTridiagonalOperator::state_index(n, k))}});
    j["pi"] = std::move(entries);
    j["max_relative_residual"] = residual;
    j["tolerance"] = tol;
    j["pass"] = ok;
    emit_json(cfg, j);
  }
  return ok ? kExitOk : kExitVerification;
}

int cmd_classify(const RunConfig& cfg) {
  const auto p = cfg.params();
  json j = header("classify", p);
  j["alpha_plus_gamma"] = p.alpha + p.gamma;
  j["region"] = to_json(classify_region(p));
  j["recurrence"] = std::string(name(classify_recurrence(p)));
  emit_json(cfg, j);
  return kExitOk;
}

int cmd_probe_divergence(const RunConfig& cfg) {
  const auto p = cfg.params_with_tau(0.0);
  const int depth = cfg.levels_or(6);
  const int order = cfg.order_or(24);
  if (depth < 3) throw UsageError("--levels must be at least 3 for probe-divergence");
  const auto probe = divergence_probe(p, depth, order);
  if (cfg.csv()) {
    std::ostringstream os;
    os << "exclusion,partial_integral\n";
    for (std::size_t i = 0; i < probe.exclusions.size(); ++i)
      os << format_double(probe.exclusions[i]) << ',' << format_double(probe.partial[i]) << '\n';
    emit(cfg, os.str());
    return kExitOk;
  }
  json j = header("probe-divergence", p);
  j["probe"] = to_json(probe);
  j["recurrence"] = std::string(name(classify_recurrence(p)));
  emit_json(cfg, j);
  return kExitOk;
}

ReplicationConfig replication_config(const RunConfig& cfg, SimulationMode mode,
                                     std::uint64_t default_reps) {
  ReplicationConfig rc;
  rc.initial = parse_state(cfg.state);
  rc.steps = cfg.steps_or(1);
  rc.replications = cfg.reps_or(default_reps);
  rc.mode = mode;
  rc.seed = cfg.seed;
  rc.threads = std::max(1u, cfg.threads);
  if (rc.steps < 1) throw UsageError("--steps must be positive");
  return rc;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto p = cfg.params_requiring_tau();
  const auto rc = replication_config(cfg, SimulationMode::chain, 1);
  if (cfg.csv()) {
    std::ostringstream os;
    write_trajectory_csv(os, simulate_trajectory(rc, p, 0));
    emit(cfg, os.str());
    return kExitOk;
  }
  json j = header("simulate", p);
  j["seed"] = rc.seed;
  j["initial"] = {rc.initial.level, rc.initial.phase};
  j["result"] = to_json(run_replications(rc, p));
  emit_json(cfg, j);
  return kExitOk;
}

int cmd_urn(const RunConfig& cfg) {
  if (!std::isnan(cfg.tau) && cfg.tau != 0)
    throw DomainError("the urn model realizes tau = 0 only");
  const auto p = ModelParameters::make(cfg.alpha, cfg.alpha, cfg.gamma);
  require_urn_parameters(p);
  const auto rc = replication_config(cfg, SimulationMode::urn, 1000);
  const auto law = urn_exact_law(rc.initial, p);
  const auto result = run_replications(rc, p);

  if (cfg.csv()) {
    std::ostringstream os;
    os << "transition,count,frequency,exact\n";
    std::map<ChainState, std::uint64_t> totals;
    for (const auto& [key, c] : result.transitions) totals[key.first] += c;
    for (const auto& [key, c] : result.transitions) {
      double exact = std::numeric_limits<double>::quiet_NaN();
      if (key.first == rc.initial) {
        auto it = law.find(key.second);
        if (it != law.end()) exact = boost::rational_cast<double>(it->second);
      }
      os << '"' << transition_key(key.first, key.second) << "\"," << c << ','
         << format_double(double(c) / double(totals[key.first])) << ','
         << format_double(exact) << '\n';
    }
    emit(cfg, os.str());
    return kExitOk;
  }
  json j = header("urn", p);
  j["seed"] = rc.seed;
  json exact = json::object();
  for (const auto& [to, r] : law) {
    std::ostringstream frac;
    frac << r.numerator() << '/' << r.denominator();
    exact[transition_key(rc.initial, to)] = {{"fraction", frac.str()},
                                             {"value", boost::rational_cast<double>(r)}};
  }
  j["exact"] = std::move(exact);
  j["result"] = to_json(result);
  emit_json(cfg, j);
  return kExitOk;
}

struct Check {
  std::string name;
  double value;
  double expected;
  double tolerance;
  [[nodiscard]] bool pass() const { return std::abs(value - expected) <= tolerance; }
};

std::vector<Check> selftest_checks() {
  std::vector<Check> out;
  const auto zero = ModelParameters::make(0, 0, 0);

  out.push_back({"special_functions: pochhammer (1/2)_3 = 15/8", pochhammer(0.5, 3), 15.0 / 8, 1e-15});
  out.push_back({"geometry: area of the region = 1/6",
                 build_quadrature<double>(16, zero, WeightMode::unnormalized)
                     .integrate([](const auto&) { return 1.0; }),
                 1.0 / 6, 1e-12});
  out.push_back({"geometry: C(0,0,0) = 1/6", normalizing_constant<double>(zero), 1.0 / 6, 1e-14});
  const auto p = ModelParameters::make(0.5, 1.25, -0.3);
  out.push_back({"quadrature: integral of W = 1 at (0.5, 1.25, -0.3)",
                 build_quadrature<double>(24, p).integrate([](const auto&) { return 1.0; }), 1.0,
                 1e-12});
  out.push_back({"recurrence: sigma_{0,0} = 1", sigma(0, 0, p), 1.0, 1e-15});
  double worst = 0;
  for (int n = 0; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) worst = std::max(worst, std::abs(delta_ratio_identity(n, k, p) - 4));
  out.push_back({"recurrence: delta-ratio sum = 4 (max deviation, n <= 8)", worst, 0.0, 1e-12});

  const auto J1 = build_operator(OperatorKind::J1, 6, p);
  const auto J2 = build_operator(OperatorKind::J2, 6, p);
  worst = 0;
  for (int n = 0; n <= 6; ++n) {
    worst = std::max(worst, (J1.row_sums(n).array() - 1).abs().maxCoeff());
    worst = std::max(worst, (J2.row_sums(n).array() - 1).abs().maxCoeff());
  }
  out.push_back({"block_operator: row sums of J1, J2 = 1 (max deviation)", worst, 0.0, 1e-12});

  out.push_back({"stochastic_model: tau_max at (1,0,0) = C_{-1/2} = 3/5",
                 classify_region(ModelParameters::make(1, 0, 0)).tau_max, 0.6, 1e-15});
  const Eigen::VectorXd pi = invariant_measure(zero, 1);
  out.push_back({"stochastic_model: pi_{1,0} = 10 at (0,0,0)", pi(1), 10.0, 1e-12});
  out.push_back({"stochastic_model: pi_{1,1} = 14 at (0,0,0)", pi(2), 14.0, 1e-12});

  const auto table = gram_schmidt_table(2, p, build_quadrature<double>(10, p));
  out.push_back({"spectral: Gram-Schmidt sigma_{2,1} matches closed form",
                 table.sigma[PolynomialTable<double>::slot(2, 1)], sigma(2, 1, p), 1e-10});

  const auto law = urn_exact_law({1, 0}, zero);
  out.push_back({"simulation: urn stay probability at (1,0) = 1/2",
                 boost::rational_cast<double>(law.at({1, 0})), 0.5, 0.0});
  out.push_back({"simulation: urn move (1,0)->(2,0) = 1/4",
                 boost::rational_cast<double>(law.at({2, 0})), 0.25, 0.0});
  return out;
}

int cmd_selftest(const RunConfig& cfg) {
  const auto checks = selftest_checks();
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
  if (cfg.format == "json") {
    json j = report_header("selftest");
    json arr = json::array();
    for (const auto& c : checks)
      arr.push_back({{"name", c.name},
                     {"value", c.value},
                     {"expected", c.expected},
                     {"tolerance", c.tolerance},
                     {"pass", c.pass()}});
    j["checks"] = std::move(arr);
    j["pass"] = ok;
    emit_json(cfg, j);
  } else {
    std::ostringstream os;
    for (const auto& c : checks)
      os << (c.pass() ? "PASS " : "FAIL ") << c.name << "  value=" << format_double(c.value)
         << '\n';
    os << (ok ? "selftest: all checks passed\n" : "selftest: FAILED\n");
    emit(cfg, os.str());
  }
  return ok ? kExitOk : kExitVerification;
}

// ---- option wiring ---------------------------------------------------------

void add_params(CLI::App* sub, RunConfig& cfg, bool with_beta = true) {
  sub->add_option("--alpha", cfg.alpha, "weight exponent alpha");
  if (with_beta) sub->add_option("--beta", cfg.beta, "weight exponent beta");
  sub->add_option("--gamma", cfg.gamma, "weight exponent gamma");
}

void add_output(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", cfg.out, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QBD processes from Jacobi-Koornwinder polynomials on the swallow tail"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qbd 0.1.0");
  RunConfig cfg;
  std::function<int(const RunConfig&)> handler;

  auto sub = [&](const char* name, const char* help, int (*fn)(const RunConfig&)) {
    CLI::App* s = app.add_subcommand(name, help);
    s->callback([&handler, fn] { handler = fn; });
    return s;
  };

  auto* coeffs = sub("coeffs", "recurrence coefficients per family", cmd_coeffs);
  add_params(coeffs, cfg);
  coeffs->add_option("--tau", cfg.tau, "convex weight (unused, accepted for symmetry)");
  coeffs->add_option("--levels", cfg.levels, "highest level n (default 5)");
  coeffs->add_option("--family", cfg.family, "a b c d e a1 a2 a3 b1 b2 b3 c1 c2 c3 or all");
  add_output(coeffs, cfg);

  auto* build = sub("build", "assemble an operator on levels 0..N", cmd_build);
  add_params(build, cfg);
  build->add_option("--tau", cfg.tau, "convex weight of J2 in P");
  build->add_option("--levels", cfg.levels, "truncation level N (default 3)");
  build->add_option("--kind", cfg.kind, "J1 J2 P J1_TILDE J2_TILDE GENERATOR_CANDIDATE");
  add_output(build, cfg);

  auto* check = sub("check-stochastic", "sign conditions of P = (1-tau) J1 + tau J2",
                    cmd_check_stochastic);
  add_params(check, cfg);
  check->add_option("--tau", cfg.tau, "convex weight of J2")->required();
  check->add_option("--levels", cfg.levels, "truncation level N (default 15)");
  check->add_option("--tolerance", cfg.tolerance, "entries down to -tol count as zero");
  check->add_flag("--strict", cfg.strict, "require the strict families to be positive");
  check->add_flag("--expect-stochastic", cfg.expect_stochastic,
                  "exit 1 when any violation is found");
  add_output(check, cfg);

  auto* bounds = sub("tau-bounds", "region and admissible tau range", cmd_tau_bounds);
  add_params(bounds, cfg);
  add_output(bounds, cfg);

  auto* km = sub("km-verify", "spectral transition probabilities against matrix powers",
                 cmd_km_verify);
  add_params(km, cfg);
  km->add_option("--tau", cfg.tau, "single tau (default: 0, 1/2 and tau_max)");
  km->add_option("--levels", cfg.levels, "highest level compared (default 3)");
  km->add_option("--steps", cfg.steps, "highest step count (default 4)");
  km->add_option("--order", cfg.order, "quadrature order (default 32)");
  km->add_option("--tolerance", cfg.tolerance, "max abs difference (default 1e-6)");
  add_output(km, cfg);

  auto* inv = sub("invariant", "invariant measure and its residual", cmd_invariant);
  add_params(inv, cfg);
  inv->add_option("--tau", cfg.tau, "convex weight (default 0)");
  inv->add_option("--levels", cfg.levels, "truncation level N (default 15)");
  inv->add_option("--tolerance", cfg.tolerance, "max relative residual (default 1e-10)");
  add_output(inv, cfg);

  auto* cls = sub("classify", "null recurrent or transient", cmd_classify);
  add_params(cls, cfg);
  cls->add_option("--tau", cfg.tau, "convex weight (checked against tau_max)");
  add_output(cls, cfg);

  auto* probe = sub("probe-divergence", "corner-excluded partial integrals", cmd_probe_divergence);
  add_params(probe, cfg);
  probe->add_option("--tau", cfg.tau, "convex weight (default 0)");
  probe->add_option("--levels", cfg.levels, "number of exclusion sizes 10^-1..10^-L (default 6)");
  probe->add_option("--order", cfg.order, "panel quadrature order (default 24)");
  add_output(probe, cfg);

  auto* sim = sub("simulate", "Monte Carlo runs of the chain", cmd_simulate);
  add_params(sim, cfg);
  sim->add_option("--tau", cfg.tau, "convex weight of J2")->required();
  sim->add_option("--state", cfg.state, "initial state n,k (default 0,0)");
  sim->add_option("--steps", cfg.steps, "steps per replication (default 1)");
  sim->add_option("--reps", cfg.reps, "replications (default 1)");
  sim->add_option("--seed", cfg.seed, "master seed");
  sim->add_option("--threads", cfg.threads, "worker threads; results do not depend on it");
  add_output(sim, cfg);

  auto* urn = sub("urn", "two-urn sampling for beta = alpha", cmd_urn);
  add_params(urn, cfg, false);
  urn->add_option("--tau", cfg.tau, "must be 0 if given");
  urn->add_option("--state", cfg.state, "initial state n,k (default 0,0)");
  urn->add_option("--steps", cfg.steps, "steps per replication (default 1)");
  urn->add_option("--reps", cfg.reps, "replications (default 1000)");
  urn->add_option("--seed", cfg.seed, "master seed");
  urn->add_option("--threads", cfg.threads, "worker threads; results do not depend on it");
  add_output(urn, cfg);

  auto* self = sub("selftest", "quick identity checks across the modules", cmd_selftest);
  self->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  self->add_option("--out", cfg.out, "write the report here instead of stdout");
  cfg.format = "json";

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (app.got_subcommand("selftest") && self->count("--format") == 0) cfg.format = "text";

  try {
    return handler(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const IndexError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const PreconditionError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  }
}
