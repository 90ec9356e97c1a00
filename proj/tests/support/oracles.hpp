#ifndef QBD_TESTS_ORACLES_HPP_
#define QBD_TESTS_ORACLES_HPP_

// Reference values computed along routes that share no code with the
// library: Selberg's integral for the normalizing constant, the displayed
// (uncancelled) delta-ratio coefficients, the beta = alpha display, and
// nested tanh-sinh integration over the (x, y) pre-image of the region.

#include <functional>
#include <optional>

#include "qbd/parameters.hpp"
#include "qbd/recurrence.hpp"

namespace qbd::oracle {

// Normalizing constant from the two-variable Selberg integral, std::tgamma only.
double selberg_constant(const ModelParameters& p);

// Classical Jacobi chain coefficients typed straight from the recurrence,
// with no x = 0 special case. nullopt at a vanishing denominator.
std::optional<double> jacobi_a_raw(double x, double alpha, double beta);
std::optional<double> jacobi_b_raw(double x, double alpha, double beta);
std::optional<double> jacobi_c_raw(double x, double alpha, double beta);

// Displayed general formulas with the delta-ratios left as written;
// nullopt where a displayed denominator is zero (the 0/0 edges).
std::optional<double> raw_coeff_u(int n, int k, CoeffU which, const ModelParameters& p);
std::optional<double> raw_coeff_v(int n, int k, CoeffV which, const ModelParameters& p);

// The beta = alpha closed forms (b = 1/2), d applied up to k = n.
double urn_display(int n, int k, CoeffU which, double alpha, double gamma);

// Integral of f(u,v) W(u,v) over the region by nested tanh-sinh in the
// (x, y) coordinates, normalized with selberg_constant.
double brute_force_integral(const std::function<double(double, double)>& f,
                            const ModelParameters& p, double tolerance = 1e-12);

}  // namespace qbd::oracle

#endif  // QBD_TESTS_ORACLES_HPP_
