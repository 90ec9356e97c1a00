#include "qbd/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <utility>

#include "qbd/errors.hpp"
#include "qbd/geometry.hpp"

namespace qbd {

namespace {

// Golub-Welsch starting nodes for the monic Jacobi recurrence.
std::vector<double> golub_welsch_nodes(int m, double a, double b) {
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  const double ab = a + b;
  for (int n = 0; n < m; ++n) {
    if (n == 0) {
      diag(n) = (b - a) / (ab + 2);
    } else {
      const double t = 2.0 * n + ab;
      diag(n) = (b * b - a * a) / (t * (t + 2));
    }
  }
  for (int n = 1; n < m; ++n) {
    double beta;
    if (n == 1) {
      beta = 4 * (1 + a) * (1 + b) / ((2 + ab) * (2 + ab) * (3 + ab));
    } else {
      const double t = 2.0 * n + ab;
      beta = 4.0 * n * (n + a) * (n + b) * (n + ab) / (t * t * (t + 1) * (t - 1));
    }
    sub(n - 1) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw QuadratureError("Golub-Welsch eigensolver failed");
  std::vector<double> x(es.eigenvalues().data(), es.eigenvalues().data() + m);
  std::sort(x.begin(), x.end());
  return x;
}

// P_n^{(a,b)}(x) and P_{n-1}^{(a,b)}(x) by the three-term recurrence.
template <class Real>
std::pair<Real, Real> jacobi_pair(int n, const Real& a, const Real& b, const Real& x) {
  Real prev = 1;
  if (n == 0) return {prev, Real(0)};
  Real cur = ((a - b) + (a + b + 2) * x) / 2;
  for (int j = 2; j <= n; ++j) {
    const Real t = 2 * j + a + b;
    const Real c1 = 2 * j * (j + a + b) * (t - 2);
    const Real c2 = (t - 1) * (t * (t - 2) * x + a * a - b * b);
    const Real c3 = 2 * (j + a - 1) * (j + b - 1) * t;
    Real next = (c2 * cur - c3 * prev) / c1;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

template <class Real>
Real jacobi_derivative(int n, const Real& a, const Real& b, const Real& x, const Real& pn,
                       const Real& pn1) {
  const Real t = 2 * n + a + b;
  return (n * ((a - b) - t * x) * pn + 2 * (n + a) * (n + b) * pn1) / (t * (1 - x * x));
}

}  // namespace

template <class Real>
GaussRule<Real> gauss_jacobi(int m, const Real& a, const Real& b) {
  using boost::math::lgamma;
  using std::abs;
  using std::exp;
  using std::pow;
  if (m < 1) throw PreconditionError("Gauss-Jacobi rule needs at least one node");
  if (!(a > -1) || !(b > -1)) throw DomainError("Gauss-Jacobi exponents must exceed -1");
  const auto start = golub_welsch_nodes(m, static_cast<double>(a), static_cast<double>(b));
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real log_scale = lgamma(Real(m + a + 1)) + lgamma(Real(m + b + 1)) -
                         lgamma(Real(m + a + b + 1)) - lgamma(Real(m + 1));
  const Real scale = exp(log_scale) * pow(Real(2), Real(a + b + 1));
  GaussRule<Real> rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    Real x = start[i];
    bool settled = false;
    for (int it = 0; it < 40 && !settled; ++it) {
      auto [pn, pn1] = jacobi_pair(m, a, b, x);
      const Real dp = jacobi_derivative(m, a, b, x, pn, pn1);
      const Real dx = pn / dp;
      x -= dx;
      settled = abs(dx) <= 64 * m * eps;
    }
    if (!settled) throw QuadratureError("Newton refinement of Gauss-Jacobi node did not settle");
    auto [pn, pn1] = jacobi_pair(m, a, b, x);
    const Real dp = jacobi_derivative(m, a, b, x, pn, pn1);
    rule.nodes[i] = x;
    rule.weights[i] = scale / ((1 - x * x) * dp * dp);
  }
  return rule;
}

template <class Real>
GaussRule<Real> gauss_jacobi_interval(int m, const Real& lo, const Real& hi, const Real& elo,
                                      const Real& ehi) {
  using std::pow;
  GaussRule<Real> r = gauss_jacobi<Real>(m, ehi, elo);
  const Real h = (hi - lo) / 2;
  const Real jac = pow(h, Real(1 + elo + ehi));
  for (int i = 0; i < m; ++i) {
    r.nodes[i] = lo + h * (1 + r.nodes[i]);
    r.weights[i] *= jac;
  }
  return r;
}

template <class Real>
Real pairwise_sum(const Real* x, std::size_t n) {
  if (n <= 8) {
    Real s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

namespace {

template <class Real>
QuadratureNode<Real> make_node(const Real& x, const Real& y, const Real& omx, const Real& omy,
                               const Real& w) {
  QuadratureNode<Real> q;
  q.u = (x + y) / 2;
  q.v = 2 * x * y - x - y + 1;
  q.one_minus_u = (omx + omy) / 2;
  q.one_minus_v = x * omy + y * omx;
  q.weight = w;
  return q;
}

// Appends the two Duffy triangles of the corner square, restricted to
// 1 - x (or 1 - s) in [lo, hi].
template <class Real>
void add_corner(std::vector<QuadratureNode<Real>>& out, int m, const ModelParameters& p,
                const Real& scale, const Real& lo, const Real& hi, bool legendre_radial) {
  using std::pow;
  const Real al = p.alpha, be = p.beta, ga = p.gamma;
  const Real er = 2 * al + 2 * ga + 2;
  const Real zero = 0;
  const auto radial = legendre_radial ? gauss_jacobi_interval<Real>(m, lo, hi, zero, zero)
                                      : gauss_jacobi_interval<Real>(m, lo, hi, er, zero);
  const auto ta = gauss_jacobi_interval<Real>(m, zero, Real(1), Real(2 * ga + 1), zero);
  const auto tb = gauss_jacobi_interval<Real>(m, zero, Real(1), al, zero);
  for (int i = 0; i < m; ++i) {
    const Real r = radial.nodes[i];
    Real wr = radial.weights[i] * scale;
    if (legendre_radial) wr *= pow(r, er);
    for (int j = 0; j < m; ++j) {
      {
        // 1 - s = r t below the diagonal.
        const Real t = ta.nodes[j];
        const Real x = 1 - r;
        const Real s = 1 - r * t;
        const Real smooth = pow(Real(1 - r), Real(2 * be + 2 * ga + 2)) *
                            pow(Real(1 - r * t), be) * pow(Real(1 + t - r * t), al);
        out.push_back(make_node<Real>(x, Real(x * s), r, Real(r * (1 + t - r * t)),
                                      Real(wr * ta.weights[j] * smooth)));
      }
      {
        // 1 - x = r t above it.
        const Real t = tb.nodes[j];
        const Real x = 1 - r * t;
        const Real s = 1 - r;
        const Real smooth = pow(Real(1 - r * t), Real(2 * be + 2 * ga + 2)) *
                            pow(Real(1 - r), be) * pow(Real(1 + t - r * t), al);
        out.push_back(make_node<Real>(x, Real(x * s), Real(r * t), Real(r * (1 + t - r * t)),
                                      Real(wr * tb.weights[j] * smooth)));
      }
    }
  }
}

template <class Real>
void add_body(std::vector<QuadratureNode<Real>>& out, int m, const ModelParameters& p,
              const Real& scale) {
  using std::pow;
  const Real al = p.alpha, be = p.beta, ga = p.gamma;
  const Real zero = 0, half = Real(1) / 2, one = 1;
  const Real ex = 2 * be + 2 * ga + 2;
  const Real es = 2 * ga + 1;
  {
    const auto X = gauss_jacobi_interval<Real>(m, zero, half, ex, zero);
    const auto S = gauss_jacobi_interval<Real>(m, zero, one, be, es);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const Real x = X.nodes[i], s = S.nodes[j];
        const Real smooth = pow(Real(1 - x), al) * pow(Real(1 - x * s), al);
        out.push_back(make_node<Real>(x, Real(x * s), Real(1 - x), Real(1 - x * s),
                                      Real(scale * X.weights[i] * S.weights[j] * smooth)));
      }
    }
  }
  {
    const auto X = gauss_jacobi_interval<Real>(m, half, one, zero, al);
    const auto S = gauss_jacobi_interval<Real>(m, zero, half, be, zero);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const Real x = X.nodes[i], s = S.nodes[j];
        const Real smooth = pow(x, ex) * pow(Real(1 - s), es) * pow(Real(1 - x * s), al);
        out.push_back(make_node<Real>(x, Real(x * s), Real(1 - x), Real(1 - x * s),
                                      Real(scale * X.weights[i] * S.weights[j] * smooth)));
      }
    }
  }
}

template <class Real>
Real weight_scale(const ModelParameters& p, WeightMode mode) {
  using std::pow;
  if (auto err = p.admissibility_error(); !err.empty()) throw DomainError(err);
  Real k = pow(Real(2), Real(Real(p.alpha) + p.beta - p.gamma));
  if (mode == WeightMode::normalized) k /= normalizing_constant<Real>(p);
  return k;
}

}  // namespace

template <class Real>
QuadratureRule<Real> build_quadrature(int order, const ModelParameters& p, WeightMode mode) {
  if (order < 1) throw PreconditionError("quadrature order must be at least 1");
  const Real scale = weight_scale<Real>(p, mode);
  QuadratureRule<Real> rule;
  rule.order = order;
  rule.nodes.reserve(4 * static_cast<std::size_t>(order) * order);
  add_body<Real>(rule.nodes, order, p, scale);
  add_corner<Real>(rule.nodes, order, p, scale, Real(0), Real(1) / 2, false);
  return rule;
}

std::vector<double> corner_excluded_integrals(const ModelParameters& p, double tau,
                                              const std::vector<double>& exclusions, int order) {
  if (!(tau >= 0 && tau <= 1)) throw DomainError("tau must lie in [0, 1]");
  for (size_t i = 0; i < exclusions.size(); ++i) {
    const double e = exclusions[i];
    if (!(e > 0 && e < 0.5) || (i > 0 && !(e < exclusions[i - 1])))
      throw PreconditionError("exclusions must decrease inside (0, 1/2)");
  }
  const double scale = weight_scale<double>(p, WeightMode::normalized);
  auto integrand = [tau](const QuadratureNode<double>& q) {
    return 1.0 / (tau * q.one_minus_v + (1 - tau) * q.one_minus_u);
  };
  std::vector<QuadratureNode<double>> nodes;
  add_body<double>(nodes, order, p, scale);
  double total = QuadratureRule<double>{order, nodes}.integrate(integrand);
  std::vector<double> out;
  double upper = 0.5;
  for (double eps : exclusions) {
    // Panels [eps 2^j, eps 2^{j+1}] keep the radial factor smooth.
    nodes.clear();
    double lo = eps;
    while (lo < upper) {
      const double hi = std::min(2 * lo, upper);
      add_corner<double>(nodes, order, p, scale, lo, hi, true);
      lo = hi;
    }
    total += QuadratureRule<double>{order, nodes}.integrate(integrand);
    out.push_back(total);
    upper = eps;
  }
  return out;
}

template GaussRule<double> gauss_jacobi(int, const double&, const double&);
template GaussRule<Extended> gauss_jacobi(int, const Extended&, const Extended&);
template GaussRule<double> gauss_jacobi_interval(int, const double&, const double&,
                                                 const double&, const double&);
template GaussRule<Extended> gauss_jacobi_interval(int, const Extended&, const Extended&,
                                                   const Extended&, const Extended&);
template QuadratureRule<double> build_quadrature(int, const ModelParameters&, WeightMode);
template QuadratureRule<Extended> build_quadrature(int, const ModelParameters&, WeightMode);
template double pairwise_sum(const double*, std::size_t);
template Extended pairwise_sum(const Extended*, std::size_t);

}  // namespace qbd
