#ifndef QBD_GEOMETRY_HPP_
#define QBD_GEOMETRY_HPP_

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "qbd/errors.hpp"
#include "qbd/parameters.hpp"

namespace qbd {

// The three boundary factors of the swallow-tail region; all positive inside.
struct BoundaryFactors {
  double left;    // 1 - 2u + v
  double right;   // 2u + v - 1
  double curved;  // 2u^2 - 2u - v + 1
};

inline BoundaryFactors boundary_factors(double u, double v) {
  return {1 - 2 * u + v, 2 * u + v - 1, 2 * u * u - 2 * u - v + 1};
}

inline bool in_region(double u, double v) {
  const auto f = boundary_factors(u, v);
  return f.left > 0 && f.right > 0 && f.curved > 0;
}

/**
 * Normalizing constant of the weight. The two Gamma ratios
 * Gamma(2a+2g+2)/Gamma(a+g+1) are rewritten with the duplication formula so
 * that every Gamma argument stays positive on the whole admissible set
 * (a + g + 1 itself may be negative there).
 */
template <class Real>
Real normalizing_constant(const ModelParameters& p) {
  using boost::math::lgamma;
  using std::exp;
  using std::log;
  const Real al = p.alpha, be = p.beta, ga = p.gamma;
  const Real ln2 = boost::math::constants::ln_two<Real>();
  const Real lnpi = log(boost::math::constants::pi<Real>());
  const Real log_c = (al + be - ga + 2) * ln2 + lgamma(Real(al + 1)) + lgamma(Real(be + 1)) +
                     lgamma(Real(ga + 1)) + (2 * al + 2 * be + 4 * ga + 2) * ln2 +
                     lgamma(Real(al + ga + Real(1.5))) + lgamma(Real(be + ga + Real(1.5))) - lnpi +
                     lgamma(Real(al + be + ga + 3)) - lgamma(Real(al + be + 2 * ga + 3)) -
                     lgamma(Real(2 * al + 2 * be + 2 * ga + 5));
  return exp(log_c);
}

/// Normalized weight W(u,v); DomainError unless (u,v) is interior.
double weight_eval(double u, double v, const ModelParameters& p);

}  // namespace qbd

#endif  // QBD_GEOMETRY_HPP_
