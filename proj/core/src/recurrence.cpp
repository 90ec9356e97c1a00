#include "qbd/recurrence.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "qbd/errors.hpp"
#include "qbd/special_functions.hpp"

namespace qbd {

namespace {

using detail::checked_div;

constexpr std::array<std::string_view, 5> kUNames{"a", "b", "c", "d", "e"};
constexpr std::array<std::string_view, 9> kVNames{"a1", "a2", "a3", "b1", "b2",
                                                  "b3", "c1", "c2", "c3"};

void require_level(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    std::ostringstream os;
    os << "index (" << n << "," << k << ") outside 0 <= k <= n";
    throw IndexError(os.str());
  }
}

template <class Which>
void require_range(int n, int k, Which which) {
  require_level(n, k);
  if (!phase_range(n, which).contains(k)) {
    std::ostringstream os;
    os << "coefficient " << name(which) << " undefined at (" << n << "," << k << ")";
    throw IndexError(os.str());
  }
}

// Shorthands shared by all cancelled forms: g = gamma + 1/2, s = alpha+beta+1,
// m = n + g, D = n - k, S = n + k.
struct Frame {
  double al, be, g, s, m, D, S;
  Frame(int n, int k, const ModelParameters& p)
      : al(p.alpha), be(p.beta), g(p.gamma + 0.5), s(p.alpha + p.beta + 1),
        m(n + p.gamma + 0.5), D(n - k), S(n + k) {}
  [[nodiscard]] double ja(double x) const { return jacobi_a(x, al, be); }
  [[nodiscard]] double jb(double x) const { return jacobi_b(x, al, be); }
  [[nodiscard]] double jc(double x) const { return jacobi_c(x, al, be); }
};

// (D + 2g)/(D + g), which tends to 2 at D = 0 even when g = 0.
double ratio_d(const Frame& f) {
  if (f.D == 0) return 2.0;
  return checked_div(f.D + 2 * f.g, f.D + f.g, "(D+2g)/(D+g)");
}

double u_a(int n, int k, const Frame& f) {
  if (n == k) {
    if (n == 0) return checked_div(f.g + f.al + 1, 2 * f.g + f.s + 1, "a_{0,0}");
    return checked_div((f.m + f.al + 1) * (f.m + f.s),
                       (2 * f.m + f.s + 1) * (2 * n + f.g + f.s), "a_{n,n}");
  }
  return 0.5 * f.ja(f.m) * ratio_d(f) *
         checked_div(f.S + 2 * f.g + f.s, f.S + f.g + f.s, "a_{n,k}");
}

double u_c(const Frame& f) {
  return 0.5 * f.jc(f.m) *
         checked_div(f.D * (f.S + f.s), (f.D + f.g) * (f.S + f.g + f.s), "c_{n,k}");
}

double u_e(int k, const Frame& f) {
  return 0.5 * f.ja(k) *
         checked_div(f.D * (f.S + 2 * f.g + f.s), (f.D + f.g) * (f.S + f.g + f.s), "e_{n,k}");
}

double u_d(int k, const Frame& f) {
  return 0.5 * f.jc(k) * ratio_d(f) * checked_div(f.S + f.s, f.S + f.g + f.s, "d_{n,k}");
}

double u_entry(int n, int k, CoeffU which, const ModelParameters& p) {
  const Frame f(n, k, p);
  switch (which) {
    case CoeffU::a: return u_a(n, k, f);
    case CoeffU::c: return u_c(f);
    case CoeffU::e: return u_e(k, f);
    case CoeffU::d: return u_d(k, f);
    case CoeffU::b: {
      double r = 1.0 - u_a(n, k, f);
      if (k <= n - 1) r -= u_c(f) + u_e(k, f);
      if (k >= 1) r -= u_d(k, f);
      return r;
    }
  }
  throw DomainError("unknown u coefficient");
}

double v_a1(int k, const Frame& f) {
  const double r1 =
      f.D == 0 ? 2 * (2 * f.g + 1) / (f.g + 1)
               : checked_div((f.D + 2 * f.g) * (f.D + 2 * f.g + 1),
                             (f.D + f.g) * (f.D + f.g + 1), "a1_{n,k}");
  return 2 * f.jc(k) * f.ja(f.m) * r1;
}

double v_a3(int n, int k, const Frame& f) {
  if (n == k) {
    if (n == 0) return 2 * f.ja(0) * checked_div(f.g + f.al + 1, f.g + f.s + 1, "a3_{0,0}");
    return 2 * f.ja(n) *
           checked_div((f.m + f.al + 1) * (f.m + f.s),
                       (2 * n + f.g + f.s) * (2 * n + f.g + f.s + 1), "a3_{n,n}");
  }
  const double t = f.S + 2 * f.g + f.s;
  const double b = f.S + f.g + f.s;
  return 2 * f.ja(k) * f.ja(f.m) * checked_div(t * (t + 1), b * (b + 1), "a3_{n,k}");
}

double v_c1(int k, const Frame& f) {
  const double t = f.S + f.s;
  const double b = f.S + f.g + f.s;
  return 2 * f.jc(k) * f.jc(f.m) * checked_div(t * (t - 1), (b - 1) * b, "c1_{n,k}");
}

double v_c3(int k, const Frame& f) {
  return 2 * f.ja(k) * f.jc(f.m) *
         checked_div(f.D * (f.D - 1), (f.D + f.g - 1) * (f.D + f.g), "c3_{n,k}");
}

double v_entry(int n, int k, CoeffV which, const ModelParameters& p) {
  const Frame f(n, k, p);
  switch (which) {
    case CoeffV::a1: return v_a1(k, f);
    case CoeffV::a2: return 2 * (2 * f.jb(k) - 1) * u_a(n, k, f);
    case CoeffV::a3: return v_a3(n, k, f);
    case CoeffV::b1: return 2 * (2 * f.jb(f.m) - 1) * u_d(k, f);
    case CoeffV::b3: return 2 * (2 * f.jb(f.m) - 1) * u_e(k, f);
    case CoeffV::c1: return v_c1(k, f);
    case CoeffV::c2: return 2 * (2 * f.jb(k) - 1) * u_c(f);
    case CoeffV::c3: return v_c3(k, f);
    case CoeffV::b2: {
      double r = 1.0;
      for (CoeffV w : {CoeffV::a1, CoeffV::a2, CoeffV::a3, CoeffV::b1, CoeffV::b3,
                       CoeffV::c1, CoeffV::c2, CoeffV::c3}) {
        if (phase_range(n, w).contains(k)) r -= v_entry(n, k, w, p);
      }
      return r;
    }
  }
  throw DomainError("unknown v coefficient");
}

double pair_term(double x, int j, double linear) {
  // (x)_{j-1} * linear, where linear = x - 1 when j = 0 so the pair is 1.
  if (j == 0) return 1.0;
  return pochhammer(x, j - 1) * linear;
}

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

std::string_view name(CoeffU which) { return kUNames[static_cast<size_t>(which)]; }
std::string_view name(CoeffV which) { return kVNames[static_cast<size_t>(which)]; }

std::optional<CoeffU> parse_coeff_u(std::string_view s) {
  for (size_t i = 0; i < kUNames.size(); ++i)
    if (kUNames[i] == s) return static_cast<CoeffU>(i);
  return std::nullopt;
}

std::optional<CoeffV> parse_coeff_v(std::string_view s) {
  for (size_t i = 0; i < kVNames.size(); ++i)
    if (kVNames[i] == s) return static_cast<CoeffV>(i);
  return std::nullopt;
}

PhaseRange phase_range(int n, CoeffU which) {
  switch (which) {
    case CoeffU::a:
    case CoeffU::b: return {0, n};
    case CoeffU::c:
    case CoeffU::e: return {0, n - 1};
    case CoeffU::d: return {1, n};
  }
  return {0, -1};
}

PhaseRange phase_range(int n, CoeffV which) {
  switch (which) {
    case CoeffV::a2:
    case CoeffV::a3:
    case CoeffV::b2: return {0, n};
    case CoeffV::a1:
    case CoeffV::b1:
    case CoeffV::c1: return {1, n};
    case CoeffV::b3:
    case CoeffV::c2: return {0, n - 1};
    case CoeffV::c3: return {0, n - 2};
  }
  return {0, -1};
}

double sigma(int n, int k, const ModelParameters& p) {
  require_level(n, k);
  const double al = p.alpha, be = p.beta, ga = p.gamma;
  const int d = n - k;
  // (2g+2)_{d-1}/(g+3/2)_{d-1}; at d = 0 the ratio (g+1/2)/(2g+1) is 1/2.
  const double edge =
      d == 0 ? 0.5 : pochhammer(2 * ga + 2, d - 1) / pochhammer(ga + 1.5, d - 1);
  const double num = std::ldexp(1.0, 2 * k - n + 1) * edge * pochhammer(al + 1, k) *
                     pochhammer(al + ga + 1.5, n);
  const double den = pochhammer(k + al + be + 1, k) *
                     pochhammer(n + k + al + be + 2 * ga + 2, d) *
                     pochhammer(n + al + be + ga + 1.5, k);
  return checked_div(num, den, "sigma");
}

double coeff_u(int n, int k, CoeffU which, const ModelParameters& p) {
  require_range(n, k, which);
  return u_entry(n, k, which, p);
}

double coeff_v(int n, int k, CoeffV which, const ModelParameters& p) {
  require_range(n, k, which);
  return v_entry(n, k, which, p);
}

double coeff_special_gamma(int n, int k, CoeffU which, const ModelParameters& p) {
  require_range(n, k, which);
  const double al = p.alpha, be = p.beta;
  auto ja = [&](double x) { return jacobi_a(x, al, be); };
  auto jb = [&](double x) { return jacobi_b(x, al, be); };
  auto jc = [&](double x) { return jacobi_c(x, al, be); };
  auto dl = [&](double x, double y) { return delta(x, y, al, be); };
  if (p.gamma == -0.5) {
    switch (which) {
      case CoeffU::a: return 0.5 * ja(n);
      case CoeffU::c: return 0.5 * jc(n);
      case CoeffU::e: return 0.5 * ja(k);
      case CoeffU::d: return 0.5 * jc(k);
      case CoeffU::b: return 0.5 * (jb(n) + jb(k));
    }
  } else if (p.gamma == 0.5) {
    const double den = dl(n + 1, k);
    switch (which) {
      case CoeffU::a: return 0.5 * ja(n + 1) * checked_div(dl(n + 2, k), den, "a (gamma=1/2)");
      case CoeffU::c: return 0.5 * jc(n + 1) * checked_div(dl(n, k), den, "c (gamma=1/2)");
      case CoeffU::e: return 0.5 * ja(k) * checked_div(dl(n + 1, k + 1), den, "e (gamma=1/2)");
      case CoeffU::d: return 0.5 * jc(k) * checked_div(dl(n + 1, k - 1), den, "d (gamma=1/2)");
      case CoeffU::b: return 0.5 * (jb(n + 1) + jb(k));
    }
  }
  throw PreconditionError("simplified coefficients need gamma = -1/2 or gamma = 1/2");
}

double coeff_special_gamma(int n, int k, CoeffV which, const ModelParameters& p) {
  require_range(n, k, which);
  const double al = p.alpha, be = p.beta;
  auto ja = [&](double x) { return jacobi_a(x, al, be); };
  auto jb = [&](double x) { return jacobi_b(x, al, be); };
  auto jc = [&](double x) { return jacobi_c(x, al, be); };
  auto dl = [&](double x, double y) { return delta(x, y, al, be); };
  if (p.gamma == -0.5) {
    switch (which) {
      case CoeffV::a1: return 2 * ja(n) * jc(k);
      case CoeffV::a2: return ja(n) * (2 * jb(k) - 1);
      case CoeffV::a3: return 2 * ja(n) * ja(k);
      case CoeffV::b1: return (2 * jb(n) - 1) * jc(k);
      case CoeffV::b2: return 0.5 * (1 + (2 * jb(n) - 1) * (2 * jb(k) - 1));
      case CoeffV::b3: return (2 * jb(n) - 1) * ja(k);
      case CoeffV::c1: return 2 * jc(n) * jc(k);
      case CoeffV::c2: return jc(n) * (2 * jb(k) - 1);
      case CoeffV::c3: return 2 * jc(n) * ja(k);
    }
  } else if (p.gamma == 0.5) {
    const double d1 = dl(n + 1, k);
    switch (which) {
      case CoeffV::a1:
        return 2 * ja(n + 1) * jc(k) *
               checked_div(dl(n + 1.5, k - 1.5), dl(n + 0.5, k - 0.5), "a1 (gamma=1/2)");
      case CoeffV::a2:
        return ja(n + 1) * (2 * jb(k) - 1) * checked_div(dl(n + 2, k), d1, "a2 (gamma=1/2)");
      case CoeffV::a3:
        return 2 * ja(n + 1) * ja(k) *
               checked_div(dl(n + 1.5, k + 1.5), dl(n + 0.5, k + 0.5), "a3 (gamma=1/2)");
      case CoeffV::b1:
        return (2 * jb(n + 1) - 1) * jc(k) * checked_div(dl(n + 1, k - 1), d1, "b1 (gamma=1/2)");
      case CoeffV::b2: return 0.5 * (1 + (2 * jb(n + 1) - 1) * (2 * jb(k) - 1));
      case CoeffV::b3:
        return (2 * jb(n + 1) - 1) * ja(k) * checked_div(dl(n + 1, k + 1), d1, "b3 (gamma=1/2)");
      case CoeffV::c1:
        return 2 * jc(n + 1) * jc(k) *
               checked_div(dl(n - 0.5, k - 0.5), dl(n + 0.5, k + 0.5), "c1 (gamma=1/2)");
      case CoeffV::c2:
        return jc(n + 1) * (2 * jb(k) - 1) * checked_div(dl(n, k), d1, "c2 (gamma=1/2)");
      case CoeffV::c3:
        return 2 * jc(n + 1) * ja(k) *
               checked_div(dl(n - 0.5, k + 0.5), dl(n + 0.5, k - 0.5), "c3 (gamma=1/2)");
    }
  }
  throw PreconditionError("simplified coefficients need gamma = -1/2 or gamma = 1/2");
}

double b_u_alternative(int n, int k, const ModelParameters& p) {
  require_level(n, k);
  const double al = p.alpha, be = p.beta, ga = p.gamma;
  if (be * be == al * al)
    throw PreconditionError("alternative b formula divides by beta^2 - alpha^2");
  const double bm = jacobi_b(n + ga + 0.5, al, be);
  const double bk = jacobi_b(static_cast<double>(k), al, be);
  return 0.5 * (bm + bk) +
         (1 - 4 * ga * ga) / (4 * (be * be - al * al)) * (2 * bm - 1) * (2 * bk - 1);
}

double delta_ratio_identity(int n, int k, const ModelParameters& p) {
  const double al = p.alpha, be = p.beta;
  const double g = p.gamma + 0.5;
  const double m = n + g;
  const double den = delta(m, static_cast<double>(k), al, be);
  if (den == 0) throw PoleError("delta_{n+gamma+1/2,k} vanishes");
  return (delta(n + 2 * g, static_cast<double>(k), al, be) +
          delta(static_cast<double>(n), static_cast<double>(k), al, be) +
          delta(m, k - g, al, be) + delta(m, k + g, al, be)) /
         den;
}

double pi_norm(int n, int k, const ModelParameters& p) {
  require_level(n, k);
  const double al = p.alpha, be = p.beta, ga = p.gamma;
  const int d = n - k;
  const double num = pochhammer(al + 1, k) * pochhammer(al + ga + 1.5, n) *
                     pair_term(al + be + ga + 2.5, n, n + k + al + be + ga + 1.5) *
                     pair_term(al + be + 2 * ga + 3, n + k, 2 * n + al + be + 2 * ga + 2) *
                     pair_term(2 * ga + 2, d, 2 * d + 2 * ga + 1) *
                     pair_term(al + be + 2, k, 2 * k + al + be + 1);
  const double den = pochhammer(be + 1, k) * pochhammer(be + ga + 1.5, n) *
                     pochhammer(al + be + 2, n + k) * pochhammer(ga + 1.5, n) *
                     factorial(k) * factorial(d);
  return checked_div(num, den, "pi_norm");
}

double pi_norm_jacobi_form(int n, int k, const ModelParameters& p) {
  require_level(n, k);
  const double al = p.alpha, be = p.beta, ga = p.gamma;
  const int d = n - k;
  const double g = ga + 0.5;
  const double norms = jacobi_norm_sq(g, p) / (jacobi_norm_sq(n + g, p) * jacobi_norm_sq(k, p));
  const double num = pochhammer(al + be + 2 * ga + 2, n + k) *
                     pair_term(2 * ga + 2, d, 2 * d + 2 * ga + 1) * (n + k + al + be + ga + 1.5);
  const double den = pochhammer(al + be + 2, n + k) * factorial(d) * (al + be + ga + 1.5);
  return norms * checked_div(num, den, "pi_norm_jacobi_form");
}

double tau_constant(double x, const ModelParameters& p) {
  return checked_div(1.0, 3 - 4 * jacobi_b(x, p.alpha, p.beta), "1/(3-4b)");
}

std::vector<Transition> transition_row(int n, int k, const ModelParameters& p, double tau) {
  require_level(n, k);
  const double w1 = 1 - tau;
  const double w2 = tau;
  auto u = [&](CoeffU c) { return w1 == 0 ? 0.0 : w1 * u_entry(n, k, c, p); };
  auto v = [&](CoeffV c) { return w2 == 0 ? 0.0 : w2 * v_entry(n, k, c, p); };
  std::vector<Transition> row;
  row.reserve(9);
  auto push = [&](int lvl, int ph, double x) {
    if (x != 0.0) row.push_back({lvl, ph, x});
  };
  if (n >= 1) {
    if (k >= 1) push(n - 1, k - 1, v(CoeffV::c1));
    if (k <= n - 1) push(n - 1, k, u(CoeffU::c) + v(CoeffV::c2));
    if (k <= n - 2) push(n - 1, k + 1, v(CoeffV::c3));
  }
  if (k >= 1) push(n, k - 1, u(CoeffU::d) + v(CoeffV::b1));
  push(n, k, u(CoeffU::b) + v(CoeffV::b2));
  if (k <= n - 1) push(n, k + 1, u(CoeffU::e) + v(CoeffV::b3));
  if (k >= 1) push(n + 1, k - 1, v(CoeffV::a1));
  push(n + 1, k, u(CoeffU::a) + v(CoeffV::a2));
  push(n + 1, k + 1, v(CoeffV::a3));
  return row;
}

}  // namespace qbd
