#ifndef QBD_QUADRATURE_HPP_
#define QBD_QUADRATURE_HPP_

#include <cstddef>
#include <vector>

#include "qbd/parameters.hpp"
#include "qbd/precision.hpp"

namespace qbd {

template <class Real>
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

/**
 * m-point Gauss-Jacobi rule on [-1,1] for the weight (1-x)^a (1+x)^b.
 * Nodes start from the Golub-Welsch eigenvalues (double) and are refined by
 * Newton steps on P_m^{(a,b)} in Real; weights use the closed form in terms
 * of P_m'. QuadratureError if Newton does not settle.
 */
template <class Real>
GaussRule<Real> gauss_jacobi(int m, const Real& a, const Real& b);

// Same rule moved to [lo,hi] for the weight (x-lo)^elo (hi-x)^ehi.
template <class Real>
GaussRule<Real> gauss_jacobi_interval(int m, const Real& lo, const Real& hi, const Real& elo,
                                      const Real& ehi);

template <class Real>
struct QuadratureNode {
  Real u;
  Real v;
  // 1-u and 1-v formed from the pre-image so they keep full relative
  // accuracy next to the corner (1,1).
  Real one_minus_u;
  Real one_minus_v;
  Real weight;
};

enum class WeightMode {
  normalized,    // sum_i w_i f(u_i,v_i) ~ integral of f W over the region
  unnormalized,  // the same without the 1/C factor
};

/**
 * Product rule over the swallow-tail region. The map
 *   u = (x+y)/2,  v = 2xy - x - y + 1,  0 <= y <= x <= 1
 * turns the boundary factors into 2(1-x)(1-y), 2xy and (x-y)^2/2 with
 * Jacobian x - y. Writing y = x s, the integrand on the (x,s) square is
 *   x^{2b+2g+2} (1-x)^a s^b (1-s)^{2g+1} (1-xs)^a,
 * which is split into four tensor Gauss-Jacobi pieces so every algebraic
 * edge or corner singularity sits in a node weight:
 *   x in [0,1/2]:              x and s exponents in the weights;
 *   x in [1/2,1], s in [0,1/2]: (1-x)^a and s^b in the weights;
 *   the corner square near (1,1), cut along its diagonal and mapped by
 *   Duffy coordinates to absorb (1-x)^a (1-xs)^a (1-s)^{2g+1}.
 * Each piece uses m x m nodes, so the rule has 4 m^2 nodes.
 */
template <class Real>
struct QuadratureRule {
  int order = 0;
  std::vector<QuadratureNode<Real>> nodes;

  template <class F>
  Real integrate(F&& f) const;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

template <class Real>
QuadratureRule<Real> build_quadrature(int order, const ModelParameters& p,
                                      WeightMode mode = WeightMode::normalized);

// Pairwise summation; the result does not depend on how callers chunk work.
template <class Real>
Real pairwise_sum(const Real* x, std::size_t n);

template <class Real>
Real pairwise_sum(const std::vector<Real>& x) {
  return pairwise_sum(x.data(), x.size());
}

template <class Real>
template <class F>
Real QuadratureRule<Real>::integrate(F&& f) const {
  std::vector<Real> terms;
  terms.reserve(nodes.size());
  for (const auto& q : nodes) terms.push_back(q.weight * f(q));
  return pairwise_sum(terms);
}

/**
 * Partial integrals of W/(1 - tau v - (1 - tau) u) with the corner square
 * max(1-x, 1-s) < eps removed, one value per eps in `exclusions`.
 * Each new strip between consecutive eps values is covered by panels whose
 * width doubles away from the corner, so the radial factor stays smooth.
 */
std::vector<double> corner_excluded_integrals(const ModelParameters& p, double tau,
                                              const std::vector<double>& exclusions,
                                              int order);

extern template GaussRule<double> gauss_jacobi(int, const double&, const double&);
extern template GaussRule<Extended> gauss_jacobi(int, const Extended&, const Extended&);
extern template GaussRule<double> gauss_jacobi_interval(int, const double&, const double&,
                                                        const double&, const double&);
extern template GaussRule<Extended> gauss_jacobi_interval(int, const Extended&, const Extended&,
                                                          const Extended&, const Extended&);
extern template QuadratureRule<double> build_quadrature(int, const ModelParameters&, WeightMode);
extern template QuadratureRule<Extended> build_quadrature(int, const ModelParameters&,
                                                          WeightMode);
extern template double pairwise_sum(const double*, std::size_t);
extern template Extended pairwise_sum(const Extended*, std::size_t);

}  // namespace qbd

#endif  // QBD_QUADRATURE_HPP_
