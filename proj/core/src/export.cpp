#include "qbd/export.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "qbd/errors.hpp"
#include "qbd/recurrence.hpp"

namespace qbd {

json report_header(std::string_view command) {
  json j;
  j["schema"] = std::string(kSchema);
  j["command"] = std::string(command);
  return j;
}

json to_json(const ModelParameters& p) {
  json j{{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}};
  j["tau"] = p.tau ? json(*p.tau) : json(nullptr);
  return j;
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const BlockTridiagonalOperator& op) {
  json j{{"kind", std::string(name(op.kind()))}, {"params", to_json(op.params())}};
  json levels = json::array();
  for (const auto& l : op.levels()) {
    levels.push_back({{"n", l.level},
                      {"variable", std::string(name(l.variable))},
                      {"A", to_json(l.A)},
                      {"B", to_json(l.B)},
                      {"C", to_json(l.C)}});
  }
  j["levels"] = std::move(levels);
  return j;
}

json to_json(const QuadratureRule<double>& rule) {
  json nodes = json::array();
  for (const auto& q : rule.nodes) nodes.push_back({q.u, q.v, q.weight});
  return {{"order", rule.order}, {"layout", "[u, v, weight]"}, {"nodes", std::move(nodes)}};
}

json to_json(const PolynomialTable<double>& table) {
  json polys = json::array();
  for (int n = 0; n <= table.max_degree; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto s = PolynomialTable<double>::slot(n, k);
      polys.push_back({{"n", n},
                       {"k", k},
                       {"sigma", table.sigma[s]},
                       {"norm_sq", table.norm_sq[s]},
                       {"Q", table.normalized[s]}});
    }
  }
  return {{"max_degree", table.max_degree},
          {"basis", "u^(d-j) v^j at index d(d+1)/2 + j"},
          {"polynomials", std::move(polys)}};
}

json to_json(const RegionReport& r) {
  return {{"region", std::string(name(r.region))},
          {"gamma_constraint", r.gamma_constraint},
          {"gamma_constraint_holds", r.gamma_constraint_holds},
          {"tau_max", r.tau_max}};
}

json to_json(const StochasticityViolation& v) {
  return {{"level", v.level},
          {"block", std::string(1, v.block)},
          {"row", v.row},
          {"column", v.column},
          {"value", v.value},
          {"inequality", std::string(inequality_text(v.family))}};
}

json to_json(const std::vector<StochasticityViolation>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

json to_json(const GeneratorFeasibility& g) {
  json j{{"feasible", g.feasible}};
  if (g.witness) {
    const auto& w = *g.witness;
    j["witness"] = {{"level", w.level},     {"block", std::string(1, w.block)},
                    {"row", w.row},         {"column", w.column},
                    {"value", w.value},     {"entry", w.coefficients}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json to_json(const DivergenceProbe& d) {
  return {{"exclusions", d.exclusions},
          {"partial_integrals", d.partial},
          {"increment_ratio", d.increment_ratio},
          {"growing", d.growing}};
}

std::string transition_key(const ChainState& from, const ChainState& to) {
  std::ostringstream os;
  os << from.level << ',' << from.phase << "->" << to.level << ',' << to.phase;
  return os.str();
}

json to_json(const ReplicationResult& r) {
  json counts = json::object();
  json freq = json::object();
  std::map<ChainState, std::uint64_t> from_totals;
  for (const auto& [key, c] : r.transitions) from_totals[key.first] += c;
  for (const auto& [key, c] : r.transitions) {
    const auto k = transition_key(key.first, key.second);
    counts[k] = c;
    freq[k] = static_cast<double>(c) / static_cast<double>(from_totals[key.first]);
  }
  json occ = json::object();
  for (const auto& [s, c] : r.occupancy)
    occ[std::to_string(s.level) + "," + std::to_string(s.phase)] = c;
  return {{"replications", r.replications},
          {"steps", r.steps},
          {"counts", std::move(counts)},
          {"frequencies", std::move(freq)},
          {"occupancy", std::move(occ)}};
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

void write_coefficient_csv(std::ostream& os, std::string_view family, int N,
                           const ModelParameters& p) {
  const auto u = parse_coeff_u(family);
  const auto v = parse_coeff_v(family);
  if (!u && !v) throw PreconditionError("unknown coefficient family " + std::string(family));
  os << "n,k," << family << '\n';
  for (int n = 0; n <= N; ++n) {
    const PhaseRange r = u ? phase_range(n, *u) : phase_range(n, *v);
    for (int k = std::max(r.lo, 0); k <= r.hi; ++k) {
      const double x = u ? coeff_u(n, k, *u, p) : coeff_v(n, k, *v, p);
      os << n << ',' << k << ',' << format_double(x) << '\n';
    }
  }
}

double KmComparison::abs_diff() const { return std::abs(km_value - matrix_power_value); }

void write_km_csv(std::ostream& os, const std::vector<KmComparison>& rows) {
  os << "i,j,n,km_value,matrix_power_value,abs_diff\n";
  for (const auto& r : rows) {
    os << '"' << r.level_i << ',' << r.phase_i << "\",\"" << r.level_j << ',' << r.phase_j
       << "\"," << r.steps << ',' << format_double(r.km_value) << ','
       << format_double(r.matrix_power_value) << ',' << format_double(r.abs_diff()) << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const std::vector<ChainState>& path) {
  os << "t,level,phase\n";
  for (std::size_t t = 0; t < path.size(); ++t)
    os << t << ',' << path[t].level << ',' << path[t].phase << '\n';
}

}  // namespace qbd
