#ifndef QBD_BLOCK_OPERATOR_HPP_
#define QBD_BLOCK_OPERATOR_HPP_

#include <Eigen/Dense>
#include <string_view>
#include <vector>

#include "qbd/parameters.hpp"

namespace qbd {

enum class Variable { U, V, MIXED };
enum class OperatorKind { J1, J2, P, J1_TILDE, J2_TILDE, GENERATOR_CANDIDATE };

std::string_view name(Variable v);
std::string_view name(OperatorKind kind);

// One level of a block tridiagonal operator: A is (n+1)x(n+2), B is
// (n+1)x(n+1), C is (n+1)xn (0 columns at n = 0).
struct LevelBlockTriple {
  int level = 0;
  Variable variable = Variable::U;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
};

LevelBlockTriple build_level_u(int n, const ModelParameters& p);
LevelBlockTriple build_level_v(int n, const ModelParameters& p);

/**
 * Levels 0..N of J1, J2 or a combination. The states are (n,k), 0 <= k <= n,
 * flattened level by level. Products with vectors drop the A_N block, which
 * would point outside the truncation.
 */
class BlockTridiagonalOperator {
 public:
  BlockTridiagonalOperator(ModelParameters params, OperatorKind kind,
                           std::vector<LevelBlockTriple> levels);

  [[nodiscard]] const ModelParameters& params() const { return params_; }
  [[nodiscard]] OperatorKind kind() const { return kind_; }
  [[nodiscard]] int truncation() const { return static_cast<int>(levels_.size()) - 1; }
  [[nodiscard]] const std::vector<LevelBlockTriple>& levels() const { return levels_; }
  [[nodiscard]] const LevelBlockTriple& level(int n) const { return levels_.at(n); }

  [[nodiscard]] Eigen::Index num_states() const { return num_states(truncation()); }
  static Eigen::Index num_states(int N) { return Eigen::Index(N + 1) * (N + 2) / 2; }
  static Eigen::Index state_index(int n, int k) { return Eigen::Index(n) * (n + 1) / 2 + k; }

  // x -> M x on the truncated state space.
  [[nodiscard]] Eigen::VectorXd apply_right(const Eigen::VectorXd& x) const;
  // y -> y^T M on the truncated state space.
  [[nodiscard]] Eigen::VectorXd apply_left(const Eigen::VectorXd& y) const;

  // Dense square truncation (A_N dropped). Only meant for small N.
  [[nodiscard]] Eigen::MatrixXd to_dense() const;

  // Row sums of [C_n | B_n | A_n] for one level.
  [[nodiscard]] Eigen::VectorXd row_sums(int n) const;

  // w1 * lhs + w2 * rhs, blockwise. Truncations must agree.
  static BlockTridiagonalOperator combine(double w1, const BlockTridiagonalOperator& lhs,
                                          double w2, const BlockTridiagonalOperator& rhs,
                                          OperatorKind kind, ModelParameters params);

 private:
  ModelParameters params_;
  OperatorKind kind_;
  std::vector<LevelBlockTriple> levels_;
};

/**
 * J1, J2, their (0,1)-normalized variants (alpha <-> beta and B_{n,1} - I),
 * P = (1 - tau) J1 + tau J2 (needs p.tau), or the generator candidate
 * tau (J2 - J1) with tau defaulting to 1.
 */
BlockTridiagonalOperator build_operator(OperatorKind kind, int N, const ModelParameters& p);

}  // namespace qbd

#endif  // QBD_BLOCK_OPERATOR_HPP_
