#ifndef QBD_STOCHASTIC_HPP_
#define QBD_STOCHASTIC_HPP_

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbd/block_operator.hpp"
#include "qbd/parameters.hpp"

namespace qbd {

enum class Region { A, B, C, BOUNDARY };
std::string_view name(Region r);

struct RegionReport {
  Region region = Region::BOUNDARY;
  std::string gamma_constraint;
  bool gamma_constraint_holds = true;
  double tau_max = 1.0;
};

/// C_x = 1/(3 - 4 b_{x+1/2}); C_{-1/2}, C_{1/2}, C_{gamma+1} are the tau bounds.
double tau_bound_constant(double x, const ModelParameters& p);

/**
 * Region A = {beta > alpha, beta > -alpha}: tau in [0,1].
 * Region B = {alpha > beta}: tau in [0, C_{-1/2}].
 * Region C = {beta > alpha, beta < -alpha}: tau in [0, min(C_{1/2}, C_{gamma+1})].
 * The lines beta = alpha and beta = -alpha (with beta > alpha) are reported
 * as BOUNDARY; every bound above tends to 1 there, so tau_max = 1.
 */
RegionReport classify_region(const ModelParameters& p);

// P = (1 - tau) J1 + tau J2 on levels 0..N; needs p.tau.
BlockTridiagonalOperator build_P(const ModelParameters& p, int N);

// The nine entry families of P, numbered in the order of the sign
// conditions: a1, (a,a2), a3, (d,b1), (b,b2), (e,b3), c1, (c,c2), c3.
enum class EntryFamily : int { a1 = 1, a_a2, a3, d_b1, b_b2, e_b3, c1, c_c2, c3 };
std::string_view inequality_text(EntryFamily f);
bool is_strict(EntryFamily f);

struct StochasticityViolation {
  int level = 0;
  char block = 'B';
  int row = 0;
  int column = 0;
  double value = 0.0;
  EntryFamily family = EntryFamily::b_b2;
};

struct ValidationOptions {
  // Entries down to -tolerance count as zero.
  double tolerance = 1e-12;
  // Require the strict families to be positive, not just nonnegative.
  // Families that carry a factor tau are skipped when p.tau == 0.
  bool strict = false;
};

/**
 * Checks every templated entry of every level (A_N included) against its
 * sign condition. The (c, c2) family is checked for k = 0..n-1, the rows
 * where C_{n,2} has its diagonal.
 */
std::vector<StochasticityViolation> validate_stochastic(const BlockTridiagonalOperator& P,
                                                        const ValidationOptions& opts = {});

// Smallest templated entry over all levels (the stochasticity margin).
StochasticityViolation smallest_entry(const BlockTridiagonalOperator& P);

/// pi_{n,k} = Pi_{n,k} for n <= N, flattened level by level.
Eigen::VectorXd invariant_measure(const ModelParameters& p, int N);

enum class Recurrence { NULL_RECURRENT, TRANSIENT };
std::string_view name(Recurrence r);

// NULL_RECURRENT iff -3/2 < alpha + gamma <= -1. PreconditionError if p.tau
// is set and exceeds the stochastic bound.
Recurrence classify_recurrence(const ModelParameters& p);

struct DivergenceProbe {
  std::vector<double> exclusions;  // corner square sizes, decreasing
  std::vector<double> partial;     // nondecreasing partial integrals
  // Ratio of the last two increments; about 10^{-(2 alpha + 2 gamma + 2)}.
  double increment_ratio = 0.0;
  bool growing = false;            // increment_ratio >= kGrowthThreshold
  static constexpr double kGrowthThreshold = 0.5;
};

/**
 * Partial integrals of W/(1 - tau v - (1 - tau) u) with the corner square
 * of size 10^{-1}, ..., 10^{-levels} removed around (u,v) = (1,1).
 * Needs p.tau and levels >= 3.
 */
DivergenceProbe divergence_probe(const ModelParameters& p, int levels, int order = 24);

struct GeneratorWitness {
  int level = 0;
  char block = 'B';
  int row = 0;
  int column = 0;
  double value = 0.0;        // entry of J2 - J1
  std::string coefficients;  // e.g. "a2 - a"
};

struct GeneratorFeasibility {
  bool feasible = true;
  std::optional<GeneratorWitness> witness;
};

/**
 * Whether tau (J2 - J1) can be a generator for some tau > 0 on levels 0..N:
 * all off-diagonal entries >= 0 and the diagonal <= 0. Since tau > 0 only
 * scales, the first entry of J2 - J1 with the wrong sign is a witness.
 */
GeneratorFeasibility continuous_time_feasibility(const ModelParameters& p, int N,
                                                 double tolerance = 1e-12);

/**
 * Sign conditions of tau1 J1~ + J2~ for the (0,1)-normalized operators.
 * Same families and options as validate_stochastic.
 */
std::vector<StochasticityViolation> check_tilde_combination(const ModelParameters& p,
                                                            double tau1, int N,
                                                            const ValidationOptions& opts = {});

}  // namespace qbd

#endif  // QBD_STOCHASTIC_HPP_
