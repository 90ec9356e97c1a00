#include "qbd/special_functions.hpp"

#include <cmath>
#include <sstream>

namespace qbd {

ModelParameters ModelParameters::make(double alpha, double beta, double gamma,
                                      std::optional<double> tau) {
  ModelParameters p{alpha, beta, gamma, tau};
  if (auto err = p.admissibility_error(); !err.empty()) throw DomainError(err);
  return p;
}

std::string ModelParameters::admissibility_error() const {
  std::ostringstream os;
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
    os << "parameters must be finite";
  } else if (!(alpha > -1)) {
    os << "alpha must exceed -1 (got " << alpha << ")";
  } else if (!(beta > -1)) {
    os << "beta must exceed -1 (got " << beta << ")";
  } else if (!(gamma > -1)) {
    os << "gamma must exceed -1 (got " << gamma << ")";
  } else if (!(alpha + gamma + 1.5 > 0)) {
    os << "alpha + gamma + 3/2 must be positive";
  } else if (!(beta + gamma + 1.5 > 0)) {
    os << "beta + gamma + 3/2 must be positive";
  } else if (tau && !(*tau >= 0.0 && *tau <= 1.0)) {
    os << "tau must lie in [0, 1] (got " << *tau << ")";
  }
  return os.str();
}

double ModelParameters::require_tau() const {
  if (!tau) throw PreconditionError("operation needs tau");
  return *tau;
}

ModelParameters ModelParameters::with_tau(double t) const {
  ModelParameters p = *this;
  p.tau = t;
  return p;
}

ModelParameters ModelParameters::swapped() const {
  ModelParameters p = *this;
  std::swap(p.alpha, p.beta);
  return p;
}

double log_gamma_positive(double x) {
  if (!(x > 0)) {
    std::ostringstream os;
    os << "Gamma argument must be positive (got " << x << ")";
    throw DomainError(os.str());
  }
  return std::lgamma(x);
}

double jacobi_norm_sq(double x, const ModelParameters& p) {
  if (x == 0) return 1.0;  // Q_0 = 1 and the weight is normalized
  const double a = p.alpha;
  const double b = p.beta;
  const double last = 2 * x + a + b + 1;
  if (!(last > 0)) throw DomainError("jacobi_norm_sq: 2x + alpha + beta + 1 must be positive");
  const double log_num = log_gamma_positive(a + 1) + log_gamma_positive(a + b + 2) +
                         log_gamma_positive(x + 1) + log_gamma_positive(x + b + 1);
  const double log_den = log_gamma_positive(b + 1) + log_gamma_positive(x + a + 1) +
                         log_gamma_positive(x + a + b + 1);
  return std::exp(log_num - log_den) / last;
}

}  // namespace qbd
