#include "oracles.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

namespace qbd::oracle {

double selberg_constant(const ModelParameters& p) {
  // The pre-image map folds the unit square twice onto the region, with
  // boundary factors 2(1-x)(1-y), 2xy, (x-y)^2/2 and Jacobian |x-y|, so
  //   C = 2^{a+b-g-1} S_2(b+1, a+1, g+1/2).
  const double a = p.beta + 1, b = p.alpha + 1, c = p.gamma + 0.5;
  double s2 = 1;
  for (int j = 0; j < 2; ++j) {
    s2 *= std::tgamma(a + j * c) * std::tgamma(b + j * c) * std::tgamma(1 + (j + 1) * c) /
          (std::tgamma(a + b + (1 + j) * c) * std::tgamma(1 + c));
  }
  return std::pow(2.0, p.alpha + p.beta - p.gamma - 1) * s2;
}

namespace {

std::optional<double> ratio(double num, double den) {
  if (den == 0 || std::abs(den) < 1e-13) return std::nullopt;
  return num / den;
}

double dl(double x, double y, const ModelParameters& p) {
  return (x - y) * (x + y + p.alpha + p.beta + 1);
}

struct Raw {
  const ModelParameters& p;
  double g;  // gamma + 1/2

  std::optional<double> A(double x) const { return jacobi_a_raw(x, p.alpha, p.beta); }
  std::optional<double> B(double x) const { return jacobi_b_raw(x, p.alpha, p.beta); }
  std::optional<double> C(double x) const { return jacobi_c_raw(x, p.alpha, p.beta); }
};

std::optional<double> mul(std::optional<double> a, std::optional<double> b) {
  if (!a || !b) return std::nullopt;
  return *a * *b;
}

std::optional<double> twice(std::optional<double> a) {
  if (!a) return std::nullopt;
  return 2 * *a;
}

// 2b - 1
std::optional<double> shifted(std::optional<double> b) {
  if (!b) return std::nullopt;
  return 2 * *b - 1;
}

}  // namespace

std::optional<double> jacobi_a_raw(double x, double al, double be) {
  const double s = al + be + 1;
  return ratio((x + al + 1) * (x + s), (2 * x + s) * (2 * x + s + 1));
}

std::optional<double> jacobi_c_raw(double x, double al, double be) {
  return ratio(x * (x + be), (2 * x + al + be) * (2 * x + al + be + 1));
}

std::optional<double> jacobi_b_raw(double x, double al, double be) {
  const auto a = jacobi_a_raw(x, al, be);
  const auto c = jacobi_c_raw(x, al, be);
  if (!a || !c) return std::nullopt;
  return 1 - *a - *c;
}

std::optional<double> raw_coeff_u(int n, int k, CoeffU which, const ModelParameters& p) {
  const Raw r{p, p.gamma + 0.5};
  const double g = r.g, m = n + g;
  const auto den = dl(m, k, p);
  switch (which) {
    case CoeffU::a: return mul(r.A(m), ratio(0.5 * dl(n + 2 * g, k, p), den));
    case CoeffU::c: return mul(r.C(m), ratio(0.5 * dl(n, k, p), den));
    case CoeffU::e: return mul(r.A(k), ratio(0.5 * dl(m, k + g, p), den));
    case CoeffU::d: return mul(r.C(k), ratio(0.5 * dl(m, k - g, p), den));
    case CoeffU::b: {
      double s = 1;
      for (auto w : {CoeffU::a, CoeffU::c, CoeffU::d, CoeffU::e}) {
        if (!phase_range(n, w).contains(k)) continue;
        const auto x = raw_coeff_u(n, k, w, p);
        if (!x) return std::nullopt;
        s -= *x;
      }
      return s;
    }
  }
  return std::nullopt;
}

std::optional<double> raw_coeff_v(int n, int k, CoeffV which, const ModelParameters& p) {
  const Raw r{p, p.gamma + 0.5};
  const double g = r.g, m = n + g;
  const double den = dl(m, k, p);
  // delta(x1,y1) delta(x2,y2) / (delta(x3,y3) delta(x4,y4))
  auto quad = [&](double x1, double y1, double x2, double y2, double x3, double y3, double x4,
                  double y4) {
    return ratio(dl(x1, y1, p) * dl(x2, y2, p), dl(x3, y3, p) * dl(x4, y4, p));
  };
  const double h0 = 0.5 * (g - 1), h1 = 0.5 * g, h2 = 0.5 * (g + 1);
  switch (which) {
    case CoeffV::a1:
      return twice(mul(mul(r.C(k), r.A(m)),
                       quad(m, k - g, m + 0.5, k - g - 0.5, n + h1, k - h1, n + h2, k - h2)));
    case CoeffV::a2:
      return mul(shifted(r.B(k)), mul(r.A(m), ratio(dl(n + 2 * g, k, p), den)));
    case CoeffV::a3:
      return twice(mul(mul(r.A(k), r.A(m)),
                       quad(m, k + g, m + 0.5, k + g + 0.5, n + h1, k + h1, n + h2, k + h2)));
    case CoeffV::b1:
      return mul(shifted(r.B(m)), mul(r.C(k), ratio(dl(m, k - g, p), den)));
    case CoeffV::b3:
      return mul(shifted(r.B(m)), mul(r.A(k), ratio(dl(m, k + g, p), den)));
    case CoeffV::c1:
      return twice(mul(mul(r.C(k), r.C(m)),
                       quad(n, k, n - 0.5, k - 0.5, n + h0, k + h0, n + h1, k + h1)));
    case CoeffV::c2:
      return mul(shifted(r.B(k)), mul(r.C(m), ratio(dl(n, k, p), den)));
    case CoeffV::c3:
      return twice(mul(mul(r.A(k), r.C(m)),
                       quad(n, k, n - 0.5, k + 0.5, n + h0, k - h0, n + h1, k - h1)));
    case CoeffV::b2: {
      double s = 1;
      for (int wi = 0; wi < 9; ++wi) {
        const auto w = static_cast<CoeffV>(wi);
        if (w == CoeffV::b2 || !phase_range(n, w).contains(k)) continue;
        const auto x = raw_coeff_v(n, k, w, p);
        if (!x) return std::nullopt;
        s -= *x;
      }
      return s;
    }
  }
  return std::nullopt;
}

double urn_display(int n, int k, CoeffU which, double a, double g) {
  const double den_common = (2 * n - 2 * k + 2 * g + 1) * (2 * n + 2 * k + 4 * a + 2 * g + 3);
  switch (which) {
    case CoeffU::a:
      return (2 * n + 4 * a + 2 * g + 3) * (n - k + 2 * g + 1) * (n + k + 2 * a + 2 * g + 2) /
             (4 * (n + a + g + 1) * den_common);
    case CoeffU::c:
      return (2 * n + 2 * g + 1) * (n - k) * (n + k + 2 * a + 1) / (4 * (n + a + g + 1) * den_common);
    case CoeffU::e:
      return (k + 2 * a + 1) * (n - k) * (n + k + 2 * a + 2 * g + 2) / ((2 * k + 2 * a + 1) * den_common);
    case CoeffU::d:
      return k * (n - k + 2 * g + 1) * (n + k + 2 * a + 1) / ((2 * k + 2 * a + 1) * den_common);
    case CoeffU::b:
      return 0.5;
  }
  return 0;
}

double brute_force_integral(const std::function<double(double, double)>& f,
                            const ModelParameters& p, double tolerance) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double al = p.alpha, be = p.beta, ga = p.gamma;
  const double scale = std::pow(2.0, al + be - ga);
  auto outer = [&](double x, double xc) {
    const double one_minus_x = xc > 0 ? xc : 1 - x;
    if (x <= 0 || one_minus_x <= 0) return 0.0;
    auto inner = [&](double y, double yc) {
      const double x_minus_y = yc > 0 ? yc : x - y;
      if (y <= 0 || x_minus_y <= 0) return 0.0;
      const double u = 0.5 * (x + y);
      const double v = 2 * x * y - x - y + 1;
      const double r = f(u, v) * std::pow(one_minus_x * (1 - y), al) * std::pow(x, be) *
                       std::pow(y, be) * std::pow(x_minus_y, 2 * ga + 1);
      // underflow next to an integrable corner singularity
      return std::isfinite(r) ? r : 0.0;
    };
    return ts.integrate(inner, 0.0, x, tolerance);
  };
  return scale * ts.integrate(outer, 0.0, 1.0, tolerance) / selberg_constant(p);
}

}  // namespace qbd::oracle
