#include "qbd/spectral.hpp"

#include <cmath>
#include <sstream>

#include "qbd/errors.hpp"
#include "qbd/recurrence.hpp"

namespace qbd {

namespace {

struct Exponents {
  int u;
  int v;
};

Exponents exponents_of(int idx) {
  int d = 0;
  while ((d + 1) * (d + 2) / 2 <= idx) ++d;
  const int v = idx - d * (d + 1) / 2;
  return {d - v, v};
}

const std::vector<Exponents>& exponent_cache(int size) {
  static thread_local std::vector<Exponents> cache;
  for (int i = static_cast<int>(cache.size()); i < size; ++i) cache.push_back(exponents_of(i));
  return cache;
}

}  // namespace

int degree_of_size(std::size_t size) {
  int d = -1;
  while (static_cast<std::size_t>(basis_size(d + 1)) <= size) ++d;
  if (static_cast<std::size_t>(basis_size(d)) != size)
    throw PreconditionError("coefficient vector is not a full graded basis");
  return d;
}

template <class Real>
Poly<Real> poly_mul(const Poly<Real>& f, const Poly<Real>& g) {
  const int df = degree_of_size(f.size());
  const int dg = degree_of_size(g.size());
  Poly<Real> out(basis_size(df + dg), Real(0));
  const auto& ex = exponent_cache(static_cast<int>(std::max(f.size(), g.size())));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g[j] == 0) continue;
      out[monomial_index(ex[i].u + ex[j].u, ex[i].v + ex[j].v)] += f[i] * g[j];
    }
  }
  return out;
}

template <class Real>
Poly<Real> poly_mul_linear(const Poly<Real>& f, const Real& cu, const Real& cv) {
  const int df = degree_of_size(f.size());
  Poly<Real> out(basis_size(df + 1), Real(0));
  const auto& ex = exponent_cache(static_cast<int>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    out[monomial_index(ex[i].u + 1, ex[i].v)] += cu * f[i];
    out[monomial_index(ex[i].u, ex[i].v + 1)] += cv * f[i];
  }
  return out;
}

template <class Real>
Real poly_eval(const Poly<Real>& f, const Real& u, const Real& v) {
  const int d = degree_of_size(f.size());
  std::vector<Real> up(d + 1, Real(1)), vp(d + 1, Real(1));
  for (int i = 1; i <= d; ++i) {
    up[i] = up[i - 1] * u;
    vp[i] = vp[i - 1] * v;
  }
  const auto& ex = exponent_cache(static_cast<int>(f.size()));
  Real s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * up[ex[i].u] * vp[ex[i].v];
  return s;
}

template <class Real>
Real MomentTable<Real>::integrate(const Poly<Real>& f) const {
  if (f.size() > mu.size()) {
    std::ostringstream os;
    os << "polynomial of degree " << degree_of_size(f.size()) << " exceeds moment degree "
       << degree;
    throw PreconditionError(os.str());
  }
  Real s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * mu[i];
  return s;
}

template <class Real>
MomentTable<Real> compute_moments(const QuadratureRule<Real>& rule, int degree) {
  MomentTable<Real> m;
  m.degree = degree;
  m.mu.assign(basis_size(degree), Real(0));
  const std::size_t count = rule.nodes.size();
  std::vector<Real> upow(count * (degree + 1)), vpow(count * (degree + 1));
  for (std::size_t q = 0; q < count; ++q) {
    Real* up = &upow[q * (degree + 1)];
    Real* vp = &vpow[q * (degree + 1)];
    up[0] = rule.nodes[q].weight;
    vp[0] = 1;
    for (int i = 1; i <= degree; ++i) {
      up[i] = up[i - 1] * rule.nodes[q].u;
      vp[i] = vp[i - 1] * rule.nodes[q].v;
    }
  }
  std::vector<Real> terms(count);
  for (int idx = 0; idx < basis_size(degree); ++idx) {
    const Exponents e = exponents_of(idx);
    for (std::size_t q = 0; q < count; ++q)
      terms[q] = upow[q * (degree + 1) + e.u] * vpow[q * (degree + 1) + e.v];
    m.mu[idx] = pairwise_sum(terms);
  }
  return m;
}

template <class Real>
PolynomialTable<Real> gram_schmidt_table(int max_degree, const ModelParameters& p,
                                         const QuadratureRule<Real>& rule) {
  using std::abs;
  if (max_degree < 0) throw PreconditionError("table degree must be nonnegative");
  if (rule.order < 2 * max_degree + 4)
    throw PreconditionError("quadrature order must be at least 2N + 4");
  if (auto err = p.admissibility_error(); !err.empty()) throw DomainError(err);
  PolynomialTable<Real> t;
  t.max_degree = max_degree;
  t.moments = compute_moments(rule, 2 * max_degree + 1);
  const int dim = basis_size(max_degree);
  const auto& ex = exponent_cache(dim);

  // Gram matrix of the monomials.
  std::vector<Real> gram(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      gram[i * dim + j] = t.moments.mu[monomial_index(ex[i].u + ex[j].u, ex[i].v + ex[j].v)];
  auto inner = [&](const Poly<Real>& f, const Poly<Real>& g) {
    Real s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] == 0) continue;
      Real row = 0;
      for (std::size_t j = 0; j < g.size(); ++j) row += gram[i * dim + j] * g[j];
      s += f[i] * row;
    }
    return s;
  };

  std::vector<Real> nrm;
  for (int idx = 0; idx < dim; ++idx) {
    Poly<Real> f(dim, Real(0));
    f[idx] = 1;
    const Real start = gram[idx * dim + idx];
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < idx; ++j) {
        const Real c = inner(f, t.monic[j]) / nrm[j];
        for (int i = 0; i <= j; ++i) f[i] -= c * t.monic[j][i];
      }
    }
    const Real nf = inner(f, f);
    if (!(nf > start * std::numeric_limits<Real>::epsilon() * 1e3))
      throw QuadratureError("Gram-Schmidt pivot lost to rounding; raise precision or order");
    const int d = exponents_of(idx).u + exponents_of(idx).v;
    f.resize(basis_size(d));
    t.monic.push_back(f);
    nrm.push_back(nf);
  }
  for (int idx = 0; idx < dim; ++idx) {
    const Poly<Real>& P = t.monic[idx];
    Real s = 0;
    for (const Real& c : P) s += c;
    if (s == 0) throw QuadratureError("monic polynomial vanishes at (1,1)");
    Poly<Real> Q = P;
    for (Real& c : Q) c /= s;
    t.sigma.push_back(s);
    t.normalized.push_back(std::move(Q));
    t.norm_sq.push_back(nrm[idx] / (s * s));
  }
  return t;
}

template <class Real>
LevelBlockTriple extract_blocks(const PolynomialTable<Real>& table, int n, Variable variable) {
  if (n < 0 || n + 1 > table.max_degree)
    throw PreconditionError("table degree too small for block extraction");
  if (variable == Variable::MIXED) throw PreconditionError("extraction needs U or V");
  const Real cu = variable == Variable::U ? 1 : 0;
  const Real cv = variable == Variable::V ? 1 : 0;
  LevelBlockTriple out;
  out.level = n;
  out.variable = variable;
  out.A = Eigen::MatrixXd::Zero(n + 1, n + 2);
  out.B = Eigen::MatrixXd::Zero(n + 1, n + 1);
  out.C = Eigen::MatrixXd::Zero(n + 1, n);
  using Slot = PolynomialTable<Real>;
  for (int k = 0; k <= n; ++k) {
    const Poly<Real> xq = poly_mul_linear(table.Q(n, k), cu, cv);
    auto coef = [&](int m, int l) {
      return static_cast<double>(table.inner(xq, table.Q(m, l)) /
                                 table.norm_sq[Slot::slot(m, l)]);
    };
    for (int l = 0; l <= n + 1; ++l) out.A(k, l) = coef(n + 1, l);
    for (int l = 0; l <= n; ++l) out.B(k, l) = coef(n, l);
    for (int l = 0; l < n; ++l) out.C(k, l) = coef(n - 1, l);
  }
  return out;
}

double pde_eigenvalue(int n, int k, const ModelParameters& p) {
  return n * (n + p.alpha + p.beta + 2 * p.gamma + 2) + k * (k + p.alpha + p.beta + 1);
}

double pde_residual(int n, int k, const ModelParameters& p, const PolynomialTable<double>& table,
                    const std::vector<std::pair<double, double>>& points) {
  if (n > table.max_degree || k < 0 || k > n) throw IndexError("(n,k) not in polynomial table");
  const Poly<double>& q = table.Q(n, k);
  const auto& ex = exponent_cache(static_cast<int>(q.size()));
  const double al = p.alpha, be = p.beta, ga = p.gamma;
  const double lambda = pde_eigenvalue(n, k, p);
  auto pw = [](double x, int e) { return e < 0 ? 0.0 : std::pow(x, e); };
  double worst = 0;
  for (const auto& [u, v] : points) {
    const double cuu = u * (1 - u) - (1 - v) / 4;
    const double cuv = (1 - v) * (2 * u - 1);
    const double cvv = (2 * u - 1) * (2 * u - 1) + v * (1 - 2 * v);
    const double cu = be + ga + 1.5 - (al + be + 2 * ga + 3) * u;
    const double cv = 2 * ((be - al) * u - (al + be + ga + 2.5) * v + al + 1);
    double acc = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] == 0) continue;
      const int a = ex[i].u, b = ex[i].v;
      const double val = pw(u, a) * pw(v, b);
      const double du = a * pw(u, a - 1) * pw(v, b);
      const double dv = b * pw(u, a) * pw(v, b - 1);
      const double duu = a * (a - 1) * pw(u, a - 2) * pw(v, b);
      const double duv = a * b * pw(u, a - 1) * pw(v, b - 1);
      const double dvv = b * (b - 1) * pw(u, a) * pw(v, b - 2);
      acc += q[i] * (cuu * duu + cuv * duv + cvv * dvv + cu * du + cv * dv + lambda * val);
    }
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

PolynomialTable<double> to_double_table(const PolynomialTable<Extended>& table) {
  auto conv = [](const std::vector<Extended>& x) {
    std::vector<double> y;
    y.reserve(x.size());
    for (const auto& v : x) y.push_back(static_cast<double>(v));
    return y;
  };
  PolynomialTable<double> out;
  out.max_degree = table.max_degree;
  out.moments.degree = table.moments.degree;
  out.moments.mu = conv(table.moments.mu);
  for (const auto& P : table.monic) out.monic.push_back(conv(P));
  for (const auto& Q : table.normalized) out.normalized.push_back(conv(Q));
  out.sigma = conv(table.sigma);
  out.norm_sq = conv(table.norm_sq);
  return out;
}

KarlinMcGregor::KarlinMcGregor(const ModelParameters& p, int max_level, int max_steps, int order)
    : params_(p), max_level_(max_level), max_steps_(max_steps) {
  const double tau = p.require_tau();
  if (max_level < 0 || max_steps < 0) throw PreconditionError("levels and steps must be >= 0");
  const auto coarse_rule = build_quadrature<Extended>(order, p);
  const auto fine_rule = build_quadrature<Extended>(2 * order, p);
  table_ = gram_schmidt_table<Extended>(max_level, p, coarse_rule);
  const int degree = 2 * max_level + max_steps;
  coarse_ = compute_moments(coarse_rule, degree);
  fine_ = compute_moments(fine_rule, degree);
  powers_.push_back(Poly<Extended>{Extended(1)});
  for (int s = 1; s <= max_steps; ++s)
    powers_.push_back(poly_mul_linear(powers_.back(), Extended(1 - tau), Extended(tau)));
}

double KarlinMcGregor::transition(int level_i, int phase_i, int level_j, int phase_j,
                                  int steps) const {
  if (level_i < 0 || level_i > max_level_ || level_j < 0 || level_j > max_level_ ||
      phase_i < 0 || phase_i > level_i || phase_j < 0 || phase_j > level_j)
    throw IndexError("state outside the Karlin-McGregor table");
  if (steps < 0 || steps > max_steps_) throw IndexError("step count outside the prepared range");
  const Poly<Extended> f =
      poly_mul(poly_mul(table_.Q(level_i, phase_i), table_.Q(level_j, phase_j)), powers_[steps]);
  const double pi = pi_norm(level_j, phase_j, params_);
  const double coarse = static_cast<double>(coarse_.integrate(f)) * pi;
  const double fine = static_cast<double>(fine_.integrate(f)) * pi;
  if (std::abs(coarse - fine) > kDoublingTolerance) {
    std::ostringstream os;
    os << "quadrature order too low: doubling changed the transition by "
       << std::abs(coarse - fine);
    throw QuadratureError(os.str());
  }
  return fine;
}

Eigen::MatrixXd generalized_inverse(int n, const ModelParameters& p) {
  if (n < 1) throw PreconditionError("generalized inverse needs n >= 1");
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n + 1, 2 * n);
  for (int k = 0; k < n; ++k) G(k, k) = 1.0 / coeff_u(n, k, CoeffU::c, p);
  const double c1 = coeff_v(n, n, CoeffV::c1, p);
  if (n >= 2)
    G(n, n - 2) = -coeff_v(n, n - 2, CoeffV::c3, p) / (c1 * coeff_u(n, n - 2, CoeffU::c, p));
  G(n, n - 1) = -coeff_v(n, n - 1, CoeffV::c2, p) / (c1 * coeff_u(n, n - 1, CoeffU::c, p));
  G(n, 2 * n - 1) = 1.0 / c1;
  return G;
}

std::pair<bool, double> generalized_inverse_check(int n, const ModelParameters& p, double tol) {
  const Eigen::MatrixXd G = generalized_inverse(n, p);
  const auto u = build_level_u(n, p);
  const auto v = build_level_v(n, p);
  Eigen::MatrixXd stacked(2 * n, n + 1);
  stacked << u.C.transpose(), v.C.transpose();
  const double err =
      (G * stacked - Eigen::MatrixXd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff();
  return {err <= tol, err};
}

std::vector<Eigen::MatrixXd> pi_norm_recursive(int N, const ModelParameters& p) {
  std::vector<Eigen::MatrixXd> out;
  out.push_back(Eigen::MatrixXd::Ones(1, 1));
  for (int n = 1; n <= N; ++n) {
    const auto u = build_level_u(n - 1, p);
    const auto v = build_level_v(n - 1, p);
    Eigen::MatrixXd stacked(2 * n, n + 1);
    stacked << out.back() * u.A, out.back() * v.A;
    out.push_back(generalized_inverse(n, p) * stacked);
  }
  return out;
}

template Poly<double> poly_mul(const Poly<double>&, const Poly<double>&);
template Poly<Extended> poly_mul(const Poly<Extended>&, const Poly<Extended>&);
template Poly<double> poly_mul_linear(const Poly<double>&, const double&, const double&);
template Poly<Extended> poly_mul_linear(const Poly<Extended>&, const Extended&, const Extended&);
template double poly_eval(const Poly<double>&, const double&, const double&);
template Extended poly_eval(const Poly<Extended>&, const Extended&, const Extended&);
template struct MomentTable<double>;
template struct MomentTable<Extended>;
template MomentTable<double> compute_moments(const QuadratureRule<double>&, int);
template MomentTable<Extended> compute_moments(const QuadratureRule<Extended>&, int);
template PolynomialTable<double> gram_schmidt_table(int, const ModelParameters&,
                                                    const QuadratureRule<double>&);
template PolynomialTable<Extended> gram_schmidt_table(int, const ModelParameters&,
                                                      const QuadratureRule<Extended>&);
template LevelBlockTriple extract_blocks(const PolynomialTable<double>&, int, Variable);
template LevelBlockTriple extract_blocks(const PolynomialTable<Extended>&, int, Variable);

}  // namespace qbd
