#include "qbd/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qbd/errors.hpp"
#include "qbd/quadrature.hpp"
#include "qbd/recurrence.hpp"

namespace qbd {

std::string_view name(Region r) {
  switch (r) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::BOUNDARY: return "BOUNDARY";
  }
  return "?";
}

std::string_view name(Recurrence r) {
  return r == Recurrence::NULL_RECURRENT ? "NULL_RECURRENT" : "TRANSIENT";
}

double tau_bound_constant(double x, const ModelParameters& p) {
  return tau_constant(x + 0.5, p);
}

namespace {

void gamma_constraint_for(double edge, const char* edge_name, const ModelParameters& p,
                          RegionReport& r) {
  if (edge >= -0.5) {
    r.gamma_constraint = "gamma > -1";
    r.gamma_constraint_holds = p.gamma > -1;
  } else {
    r.gamma_constraint = std::string("gamma + ") + edge_name + " + 3/2 > 0";
    r.gamma_constraint_holds = p.gamma + edge + 1.5 > 0;
  }
}

}  // namespace

RegionReport classify_region(const ModelParameters& p) {
  if (auto err = p.admissibility_error(); !err.empty()) throw DomainError(err);
  const double al = p.alpha, be = p.beta;
  RegionReport r;
  if (be == al || (be == -al && be > al)) {
    r.region = Region::BOUNDARY;
    r.tau_max = 1.0;
    if (al <= be)
      gamma_constraint_for(al, "alpha", p, r);
    else
      gamma_constraint_for(be, "beta", p, r);
  } else if (al > be) {
    r.region = Region::B;
    r.tau_max = tau_bound_constant(-0.5, p);
    gamma_constraint_for(be, "beta", p, r);
  } else if (be > -al) {
    r.region = Region::A;
    r.tau_max = 1.0;
    gamma_constraint_for(al, "alpha", p, r);
  } else {
    r.region = Region::C;
    r.tau_max = std::min(tau_bound_constant(0.5, p), tau_bound_constant(p.gamma + 1, p));
    gamma_constraint_for(al, "alpha", p, r);
  }
  r.tau_max = std::min(r.tau_max, 1.0);
  return r;
}

BlockTridiagonalOperator build_P(const ModelParameters& p, int N) {
  return build_operator(OperatorKind::P, N, p);
}

std::string_view inequality_text(EntryFamily f) {
  switch (f) {
    case EntryFamily::a1: return "tau a1 > 0";
    case EntryFamily::a_a2: return "(1-tau) a + tau a2 > 0";
    case EntryFamily::a3: return "tau a3 > 0";
    case EntryFamily::d_b1: return "(1-tau) d + tau b1 >= 0";
    case EntryFamily::b_b2: return "(1-tau) b + tau b2 >= 0";
    case EntryFamily::e_b3: return "(1-tau) e + tau b3 >= 0";
    case EntryFamily::c1: return "tau c1 > 0";
    case EntryFamily::c_c2: return "(1-tau) c + tau c2 > 0";
    case EntryFamily::c3: return "tau c3 > 0";
  }
  return "?";
}

bool is_strict(EntryFamily f) {
  return f != EntryFamily::d_b1 && f != EntryFamily::b_b2 && f != EntryFamily::e_b3;
}

namespace {

bool tau_only(EntryFamily f) {
  return f == EntryFamily::a1 || f == EntryFamily::a3 || f == EntryFamily::c1 ||
         f == EntryFamily::c3;
}

// Visits every templated entry: fn(level, block, row, col, family, value).
template <class Fn>
void for_each_entry(const BlockTridiagonalOperator& P, Fn&& fn) {
  for (const auto& l : P.levels()) {
    const int n = l.level;
    for (int k = 0; k <= n; ++k) {
      if (k >= 1) fn(n, 'A', k, k - 1, EntryFamily::a1, l.A(k, k - 1));
      fn(n, 'A', k, k, EntryFamily::a_a2, l.A(k, k));
      fn(n, 'A', k, k + 1, EntryFamily::a3, l.A(k, k + 1));
      if (k >= 1) fn(n, 'B', k, k - 1, EntryFamily::d_b1, l.B(k, k - 1));
      fn(n, 'B', k, k, EntryFamily::b_b2, l.B(k, k));
      if (k <= n - 1) fn(n, 'B', k, k + 1, EntryFamily::e_b3, l.B(k, k + 1));
      if (k >= 1) fn(n, 'C', k, k - 1, EntryFamily::c1, l.C(k, k - 1));
      if (k <= n - 1) fn(n, 'C', k, k, EntryFamily::c_c2, l.C(k, k));
      if (k <= n - 2) fn(n, 'C', k, k + 1, EntryFamily::c3, l.C(k, k + 1));
    }
  }
}

}  // namespace

std::vector<StochasticityViolation> validate_stochastic(const BlockTridiagonalOperator& P,
                                                        const ValidationOptions& opts) {
  std::vector<StochasticityViolation> out;
  const bool tau_zero = P.params().tau && *P.params().tau == 0.0;
  for_each_entry(P, [&](int n, char block, int row, int col, EntryFamily f, double value) {
    bool bad = value < -opts.tolerance;
    if (!bad && opts.strict && is_strict(f) && !(tau_zero && tau_only(f))) bad = !(value > 0);
    if (bad) out.push_back({n, block, row, col, value, f});
  });
  return out;
}

StochasticityViolation smallest_entry(const BlockTridiagonalOperator& P) {
  StochasticityViolation best;
  best.value = std::numeric_limits<double>::infinity();
  for_each_entry(P, [&](int n, char block, int row, int col, EntryFamily f, double value) {
    if (value < best.value) best = {n, block, row, col, value, f};
  });
  return best;
}

Eigen::VectorXd invariant_measure(const ModelParameters& p, int N) {
  if (N < 0) throw PreconditionError("truncation level must be nonnegative");
  Eigen::VectorXd pi(BlockTridiagonalOperator::num_states(N));
  for (int n = 0; n <= N; ++n)
    for (int k = 0; k <= n; ++k) pi(BlockTridiagonalOperator::state_index(n, k)) = pi_norm(n, k, p);
  return pi;
}

Recurrence classify_recurrence(const ModelParameters& p) {
  if (auto err = p.admissibility_error(); !err.empty()) throw DomainError(err);
  if (p.tau) {
    const double bound = classify_region(p).tau_max;
    if (*p.tau > bound * (1 + 1e-12)) {
      std::ostringstream os;
      os << "tau = " << *p.tau << " exceeds the stochastic bound " << bound;
      throw PreconditionError(os.str());
    }
  }
  const double s = p.alpha + p.gamma;
  return (s > -1.5 && s <= -1.0) ? Recurrence::NULL_RECURRENT : Recurrence::TRANSIENT;
}

DivergenceProbe divergence_probe(const ModelParameters& p, int levels, int order) {
  const double tau = p.require_tau();
  if (levels < 3) throw PreconditionError("divergence probe needs at least 3 refinements");
  DivergenceProbe probe;
  for (int j = 1; j <= levels; ++j) probe.exclusions.push_back(std::pow(10.0, -j));
  probe.partial = corner_excluded_integrals(p, tau, probe.exclusions, order);
  const auto& s = probe.partial;
  const double last = s[s.size() - 1] - s[s.size() - 2];
  const double prev = s[s.size() - 2] - s[s.size() - 3];
  probe.increment_ratio = prev > 0 ? last / prev : 0.0;
  probe.growing = probe.increment_ratio >= DivergenceProbe::kGrowthThreshold;
  return probe;
}

GeneratorFeasibility continuous_time_feasibility(const ModelParameters& p, int N,
                                                 double tolerance) {
  const auto J1 = build_operator(OperatorKind::J1, N, p);
  const auto J2 = build_operator(OperatorKind::J2, N, p);
  const auto G = BlockTridiagonalOperator::combine(-1.0, J1, 1.0, J2,
                                                   OperatorKind::GENERATOR_CANDIDATE, p);
  static constexpr const char* kNames[] = {"",        "a1",      "a2 - a", "a3",     "b1 - d",
                                           "b2 - b", "b3 - e", "c1",     "c2 - c", "c3"};
  GeneratorFeasibility out;
  for_each_entry(G, [&](int n, char block, int row, int col, EntryFamily f, double value) {
    if (out.witness) return;
    const bool diagonal = block == 'B' && row == col;
    const bool bad = diagonal ? value > tolerance : value < -tolerance;
    if (bad) {
      out.feasible = false;
      out.witness = GeneratorWitness{n, block, row, col, value, kNames[static_cast<int>(f)]};
    }
  });
  return out;
}

std::vector<StochasticityViolation> check_tilde_combination(const ModelParameters& p,
                                                            double tau1, int N,
                                                            const ValidationOptions& opts) {
  ModelParameters q = p;
  q.tau.reset();
  const auto T1 = build_operator(OperatorKind::J1_TILDE, N, q);
  const auto T2 = build_operator(OperatorKind::J2_TILDE, N, q);
  const auto P = BlockTridiagonalOperator::combine(tau1, T1, 1.0, T2, OperatorKind::P, q);
  return validate_stochastic(P, opts);
}

}  // namespace qbd
