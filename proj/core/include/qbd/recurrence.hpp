#ifndef QBD_RECURRENCE_HPP_
#define QBD_RECURRENCE_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "qbd/parameters.hpp"

namespace qbd {

// Entries of the u-blocks: a on A_{n,1}, c on C_{n,1}, d/b/e on the three
// diagonals of B_{n,1}.
enum class CoeffU { a, b, c, d, e };

// Entries of the v-blocks. Superscript 1/2/3 is the sub/main/super diagonal
// of A_{n,2}, B_{n,2}, C_{n,2} respectively.
enum class CoeffV { a1, a2, a3, b1, b2, b3, c1, c2, c3 };

std::string_view name(CoeffU which);
std::string_view name(CoeffV which);
std::optional<CoeffU> parse_coeff_u(std::string_view s);
std::optional<CoeffV> parse_coeff_v(std::string_view s);

// Valid phase range [lo, hi] at level n; empty when lo > hi.
struct PhaseRange {
  int lo;
  int hi;
  [[nodiscard]] bool contains(int k) const { return k >= lo && k <= hi; }
};
PhaseRange phase_range(int n, CoeffU which);
PhaseRange phase_range(int n, CoeffV which);

/// P_{n,k}(1,1) for the monic polynomial.
double sigma(int n, int k, const ModelParameters& p);

/**
 * Closed-form recurrence coefficients. Every delta-ratio is evaluated with
 * its shared linear factors cancelled, so the k = n edge (a 0/0 in the raw
 * display for a^{(3)} and, at gamma = -1/2, for a and d) is a finite value.
 * b and b2 are complements of the other entries on the same row.
 * IndexError when k is outside phase_range(n, which).
 */
double coeff_u(int n, int k, CoeffU which, const ModelParameters& p);
double coeff_v(int n, int k, CoeffV which, const ModelParameters& p);

// Simplified displays for gamma = -1/2 and gamma = +1/2, evaluated as written
// (uncancelled delta-ratios). PreconditionError for any other gamma; a
// PoleError where the display itself is 0/0.
double coeff_special_gamma(int n, int k, CoeffU which, const ModelParameters& p);
double coeff_special_gamma(int n, int k, CoeffV which, const ModelParameters& p);

// Alternative expression for b_{n,k}; PreconditionError when beta^2 == alpha^2.
double b_u_alternative(int n, int k, const ModelParameters& p);

// Sum of the four delta-ratios appearing in a, c, d, e (equals 4).
double delta_ratio_identity(int n, int k, const ModelParameters& p);

// Diagonal of the inverse norm matrix Pi_n, from the Pochhammer display.
double pi_norm(int n, int k, const ModelParameters& p);
// Same quantity written through classical Jacobi norms.
double pi_norm_jacobi_form(int n, int k, const ModelParameters& p);

// 1/(3 - 4 b_x), the tau bound generated by the (a, a2) and (c, c2) pairs.
double tau_constant(double x, const ModelParameters& p);

struct Transition {
  int level;
  int phase;
  double prob;
};

/**
 * Nonzero entries of row (n,k) of (1-tau) J1 + tau J2 computed directly from
 * the coefficients. Entries are grouped by target level (n-1, n, n+1) and
 * ascend in phase; exact zeros are dropped.
 */
std::vector<Transition> transition_row(int n, int k, const ModelParameters& p, double tau);

}  // namespace qbd

#endif  // QBD_RECURRENCE_HPP_
