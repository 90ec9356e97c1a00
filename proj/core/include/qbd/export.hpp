#ifndef QBD_EXPORT_HPP_
#define QBD_EXPORT_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qbd/block_operator.hpp"
#include "qbd/parameters.hpp"
#include "qbd/quadrature.hpp"
#include "qbd/simulation.hpp"
#include "qbd/spectral.hpp"
#include "qbd/stochastic.hpp"

namespace qbd {

using json = nlohmann::json;

inline constexpr std::string_view kSchema = "qbd-swallowtail/1";

// {"schema": ..., "command": ...}; every report starts from this.
json report_header(std::string_view command);

json to_json(const ModelParameters& p);
json to_json(const Eigen::MatrixXd& m);
json to_json(const BlockTridiagonalOperator& op);
json to_json(const QuadratureRule<double>& rule);
json to_json(const PolynomialTable<double>& table);
json to_json(const RegionReport& r);
json to_json(const StochasticityViolation& v);
json to_json(const std::vector<StochasticityViolation>& v);
json to_json(const GeneratorFeasibility& g);
json to_json(const DivergenceProbe& d);

// "n,k->n',k'"
std::string transition_key(const ChainState& from, const ChainState& to);
json to_json(const ReplicationResult& r);

// 17 significant digits.
std::string format_double(double x);

void write_coefficient_csv(std::ostream& os, std::string_view family, int N,
                           const ModelParameters& p);

struct KmComparison {
  int level_i, phase_i, level_j, phase_j, steps;
  double km_value;
  double matrix_power_value;
  [[nodiscard]] double abs_diff() const;
};
void write_km_csv(std::ostream& os, const std::vector<KmComparison>& rows);

void write_trajectory_csv(std::ostream& os, const std::vector<ChainState>& path);

}  // namespace qbd

#endif  // QBD_EXPORT_HPP_
