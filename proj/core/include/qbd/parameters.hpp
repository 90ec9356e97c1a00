#ifndef QBD_PARAMETERS_HPP_
#define QBD_PARAMETERS_HPP_

#include <optional>
#include <string>

namespace qbd {

/**
 * Weight exponents (alpha, beta, gamma) of the swallow-tail weight plus the
 * optional convex-combination weight tau of P = (1 - tau) J1 + tau J2.
 *
 * Construct through make() to get the integrability checks
 *   alpha, beta, gamma > -1,  alpha + gamma + 3/2 > 0,  beta + gamma + 3/2 > 0,
 * and tau in [0, 1] when present. Aggregate initialization skips them, which
 * the negative tests rely on.
 */
struct ModelParameters {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::optional<double> tau;

  static ModelParameters make(double alpha, double beta, double gamma,
                              std::optional<double> tau = std::nullopt);

  // Empty string when admissible, otherwise the first violated constraint.
  [[nodiscard]] std::string admissibility_error() const;
  [[nodiscard]] bool admissible() const { return admissibility_error().empty(); }

  // tau, or a PreconditionError when the model has none.
  [[nodiscard]] double require_tau() const;

  [[nodiscard]] ModelParameters with_tau(double t) const;
  // alpha <-> beta, used for the (0,1)-normalized operators.
  [[nodiscard]] ModelParameters swapped() const;
};

}  // namespace qbd

#endif  // QBD_PARAMETERS_HPP_
