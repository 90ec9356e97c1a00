#ifndef QBD_SPECIAL_FUNCTIONS_HPP_
#define QBD_SPECIAL_FUNCTIONS_HPP_

#include <string>

#include "qbd/errors.hpp"
#include "qbd/parameters.hpp"

namespace qbd {

namespace detail {

template <class Real>
inline Real checked_div(const Real& num, const Real& den, const char* what) {
  if (den == 0) throw PoleError(std::string("vanishing denominator in ") + what);
  return num / den;
}

}  // namespace detail

/// Rising factorial (a)_m for m >= 0, extended by (a)_{-1} = 1/(a-1).
template <class Real>
Real pochhammer(const Real& a, int m) {
  if (m < -1) throw DomainError("pochhammer: order below -1");
  if (m == -1) return detail::checked_div(Real(1), Real(a - 1), "pochhammer (a)_{-1}");
  Real r = 1;
  for (int i = 0; i < m; ++i) r *= a + i;
  return r;
}

// Three-term recurrence coefficients of the classical Jacobi polynomials
// Q_x^{(beta,alpha)} on [0,1] normalized by Q_x(1) = 1, evaluated at a real
// index x. At x = 0 the common factor (x+alpha+beta)/(2x+alpha+beta) is
// cancelled, so a_0, b_0, c_0 = 0 are defined for every admissible pair.

template <class Real>
Real jacobi_a(const Real& x, const Real& alpha, const Real& beta) {
  if (x == 0) return (alpha + 1) / (alpha + beta + 2);
  const Real s = alpha + beta + 1;
  return detail::checked_div(Real((x + alpha + 1) * (x + s)),
                             Real((2 * x + s) * (2 * x + s + 1)), "jacobi_a");
}

template <class Real>
Real jacobi_c(const Real& x, const Real& alpha, const Real& beta) {
  if (x == 0) return Real(0);
  return detail::checked_div(Real(x * (x + beta)),
                             Real((2 * x + alpha + beta) * (2 * x + alpha + beta + 1)),
                             "jacobi_c");
}

template <class Real>
Real jacobi_b(const Real& x, const Real& alpha, const Real& beta) {
  if (x == 0) return (beta + 1) / (alpha + beta + 2);
  const Real s = alpha + beta + 1;
  const Real up = detail::checked_div(Real((x + alpha + 1) * (x + 1)),
                                      Real((2 * x + s) * (2 * x + s + 1)), "jacobi_b");
  const Real down = detail::checked_div(Real((x + beta) * (x + alpha + beta)),
                                        Real((2 * x + alpha + beta) * (2 * x + s)), "jacobi_b");
  return up + down;
}

/// delta(x, y) = (x - y)(x + y + alpha + beta + 1).
template <class Real>
Real delta(const Real& x, const Real& y, const Real& alpha, const Real& beta) {
  return (x - y) * (x + y + alpha + beta + 1);
}

inline double jacobi_a(double x, const ModelParameters& p) { return jacobi_a(x, p.alpha, p.beta); }
inline double jacobi_b(double x, const ModelParameters& p) { return jacobi_b(x, p.alpha, p.beta); }
inline double jacobi_c(double x, const ModelParameters& p) { return jacobi_c(x, p.alpha, p.beta); }
inline double delta(double x, double y, const ModelParameters& p) {
  return delta(x, y, p.alpha, p.beta);
}

/// log Gamma(x) for x > 0; DomainError otherwise.
double log_gamma_positive(double x);

/**
 * Squared norm of Q_x^{(beta,alpha)} under the normalized Jacobi weight on
 * [0,1], at real index x. Evaluated with log-Gamma differences so indices up
 * to ~10^3 do not overflow. DomainError if any Gamma argument is nonpositive.
 */
double jacobi_norm_sq(double x, const ModelParameters& p);

}  // namespace qbd

#endif  // QBD_SPECIAL_FUNCTIONS_HPP_
