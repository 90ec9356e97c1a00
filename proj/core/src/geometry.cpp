#include "qbd/geometry.hpp"

#include <sstream>

namespace qbd {

double weight_eval(double u, double v, const ModelParameters& p) {
  if (auto err = p.admissibility_error(); !err.empty()) throw DomainError(err);
  if (!in_region(u, v)) {
    std::ostringstream os;
    os << "(" << u << ", " << v << ") is not interior to the swallow-tail region";
    throw DomainError(os.str());
  }
  const auto f = boundary_factors(u, v);
  return std::pow(f.left, p.alpha) * std::pow(f.right, p.beta) * std::pow(f.curved, p.gamma) /
         normalizing_constant<double>(p);
}

}  // namespace qbd
