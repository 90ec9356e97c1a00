#ifndef QBD_SPECTRAL_HPP_
#define QBD_SPECTRAL_HPP_

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qbd/block_operator.hpp"
#include "qbd/geometry.hpp"
#include "qbd/parameters.hpp"
#include "qbd/precision.hpp"
#include "qbd/quadrature.hpp"

namespace qbd {

// Bivariate polynomials are coefficient vectors over the graded monomial
// basis u^{d-j} v^j, position d(d+1)/2 + j.
inline int monomial_index(int u_pow, int v_pow) {
  const int d = u_pow + v_pow;
  return d * (d + 1) / 2 + v_pow;
}
inline int basis_size(int degree) { return (degree + 1) * (degree + 2) / 2; }
int degree_of_size(std::size_t size);

template <class Real>
using Poly = std::vector<Real>;

template <class Real>
Poly<Real> poly_mul(const Poly<Real>& f, const Poly<Real>& g);
// f times (cu u + cv v).
template <class Real>
Poly<Real> poly_mul_linear(const Poly<Real>& f, const Real& cu, const Real& cv);
template <class Real>
Real poly_eval(const Poly<Real>& f, const Real& u, const Real& v);

// Integrals of u^a v^b W for a + b <= degree.
template <class Real>
struct MomentTable {
  int degree = -1;
  std::vector<Real> mu;
  [[nodiscard]] Real integrate(const Poly<Real>& f) const;
};

template <class Real>
MomentTable<Real> compute_moments(const QuadratureRule<Real>& rule, int degree);

/**
 * Monic P_{n,k} (leading monomial u^{n-k} v^k) and Q_{n,k} = P_{n,k}/P_{n,k}(1,1)
 * for 0 <= k <= n <= max_degree, indexed like the states (n(n+1)/2 + k).
 */
template <class Real>
struct PolynomialTable {
  int max_degree = -1;
  MomentTable<Real> moments;  // degree 2 max_degree + 1
  std::vector<Poly<Real>> monic;
  std::vector<Poly<Real>> normalized;
  std::vector<Real> sigma;    // P_{n,k}(1,1)
  std::vector<Real> norm_sq;  // <Q_{n,k}, Q_{n,k}>

  [[nodiscard]] static std::size_t slot(int n, int k) {
    return static_cast<std::size_t>(n) * (n + 1) / 2 + k;
  }
  [[nodiscard]] const Poly<Real>& Q(int n, int k) const { return normalized.at(slot(n, k)); }
  [[nodiscard]] const Poly<Real>& P(int n, int k) const { return monic.at(slot(n, k)); }
  [[nodiscard]] Real inner(const Poly<Real>& f, const Poly<Real>& g) const {
    return moments.integrate(poly_mul(f, g));
  }
};

/**
 * Gram-Schmidt on the graded monomials (ascending v-power inside each
 * degree) under the weighted inner product, done on coefficient vectors
 * against the moment table, with one reorthogonalization pass. The result
 * is the monic basis of the recurrence. PreconditionError if
 * rule.order < 2 max_degree + 4; QuadratureError if a pivot norm collapses.
 */
template <class Real>
PolynomialTable<Real> gram_schmidt_table(int max_degree, const ModelParameters& p,
                                         const QuadratureRule<Real>& rule);

/**
 * Recurrence blocks recovered from the table by moments:
 *   A[k][l] = <x Q_{n,k}, Q_{n+1,l}> / <Q_{n+1,l}, Q_{n+1,l}>, x = u or v,
 * and likewise for B (level n) and C (level n-1). Needs n + 1 <= max_degree.
 */
template <class Real>
LevelBlockTriple extract_blocks(const PolynomialTable<Real>& table, int n, Variable variable);

double pde_eigenvalue(int n, int k, const ModelParameters& p);

// max |D Q_{n,k} + lambda_{n,k} Q_{n,k}| over the points.
double pde_residual(int n, int k, const ModelParameters& p, const PolynomialTable<double>& table,
                    const std::vector<std::pair<double, double>>& points);

PolynomialTable<double> to_double_table(const PolynomialTable<Extended>& table);

/**
 * n-step transition probabilities of P = (1 - tau) J1 + tau J2 from the
 * spectral integral
 *   Pi_{j,j'} * integral of ((1-tau) u + tau v)^n Q_{i,i'} Q_{j,j'} W.
 * Moments are formed at two quadrature orders (m and 2m); a disagreement
 * above 1e-7 raises QuadratureError.
 */
class KarlinMcGregor {
 public:
  KarlinMcGregor(const ModelParameters& p, int max_level, int max_steps, int order = 32);

  [[nodiscard]] double transition(int level_i, int phase_i, int level_j, int phase_j,
                                  int steps) const;

  [[nodiscard]] int max_level() const { return max_level_; }
  [[nodiscard]] int max_steps() const { return max_steps_; }
  [[nodiscard]] const PolynomialTable<Extended>& table() const { return table_; }

  static constexpr double kDoublingTolerance = 1e-7;

 private:
  ModelParameters params_;
  int max_level_;
  int max_steps_;
  PolynomialTable<Extended> table_;
  MomentTable<Extended> coarse_;
  MomentTable<Extended> fine_;
  std::vector<Poly<Extended>> powers_;
};

/**
 * The generalized inverse of [C_{n,1}^T; C_{n,2}^T], an (n+1) x 2n matrix
 * with 1/c_{n,k} on the first n rows and the last row built from c^{(1)},
 * c^{(2)}, c^{(3)}.
 */
Eigen::MatrixXd generalized_inverse(int n, const ModelParameters& p);

// Max entry of |G_n [C_{n,1}^T; C_{n,2}^T] - I| and whether it is below tol.
std::pair<bool, double> generalized_inverse_check(int n, const ModelParameters& p,
                                                  double tol = 1e-12);

// Pi_0 = [1], Pi_n = G_n [Pi_{n-1} A_{n-1,1}; Pi_{n-1} A_{n-1,2}], n <= N.
std::vector<Eigen::MatrixXd> pi_norm_recursive(int N, const ModelParameters& p);

extern template struct MomentTable<double>;
extern template struct MomentTable<Extended>;
extern template PolynomialTable<double> gram_schmidt_table(int, const ModelParameters&,
                                                           const QuadratureRule<double>&);
extern template PolynomialTable<Extended> gram_schmidt_table(int, const ModelParameters&,
                                                             const QuadratureRule<Extended>&);
extern template LevelBlockTriple extract_blocks(const PolynomialTable<double>&, int, Variable);
extern template LevelBlockTriple extract_blocks(const PolynomialTable<Extended>&, int, Variable);

}  // namespace qbd

#endif  // QBD_SPECTRAL_HPP_
