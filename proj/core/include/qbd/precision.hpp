#ifndef QBD_PRECISION_HPP_
#define QBD_PRECISION_HPP_

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace qbd {

// 50 significant decimal digits; used by the Gram-Schmidt oracle and the
// extended-precision quadrature.
using Extended = boost::multiprecision::cpp_bin_float_50;

template <class Real>
inline double to_double(const Real& x) {
  return static_cast<double>(x);
}

}  // namespace qbd

#endif  // QBD_PRECISION_HPP_
