#include "qbd/block_operator.hpp"

#include <utility>

#include "qbd/errors.hpp"
#include "qbd/recurrence.hpp"

namespace qbd {

std::string_view name(Variable v) {
  switch (v) {
    case Variable::U: return "U";
    case Variable::V: return "V";
    case Variable::MIXED: return "MIXED";
  }
  return "?";
}

std::string_view name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::J1: return "J1";
    case OperatorKind::J2: return "J2";
    case OperatorKind::P: return "P";
    case OperatorKind::J1_TILDE: return "J1_TILDE";
    case OperatorKind::J2_TILDE: return "J2_TILDE";
    case OperatorKind::GENERATOR_CANDIDATE: return "GENERATOR_CANDIDATE";
  }
  return "?";
}

namespace {

LevelBlockTriple empty_level(int n, Variable v) {
  LevelBlockTriple t;
  t.level = n;
  t.variable = v;
  t.A = Eigen::MatrixXd::Zero(n + 1, n + 2);
  t.B = Eigen::MatrixXd::Zero(n + 1, n + 1);
  t.C = Eigen::MatrixXd::Zero(n + 1, n);
  return t;
}

}  // namespace

LevelBlockTriple build_level_u(int n, const ModelParameters& p) {
  LevelBlockTriple t = empty_level(n, Variable::U);
  for (int k = 0; k <= n; ++k) {
    t.A(k, k) = coeff_u(n, k, CoeffU::a, p);
    t.B(k, k) = coeff_u(n, k, CoeffU::b, p);
    if (k <= n - 1) {
      t.C(k, k) = coeff_u(n, k, CoeffU::c, p);
      t.B(k, k + 1) = coeff_u(n, k, CoeffU::e, p);
    }
    if (k >= 1) t.B(k, k - 1) = coeff_u(n, k, CoeffU::d, p);
  }
  return t;
}

LevelBlockTriple build_level_v(int n, const ModelParameters& p) {
  LevelBlockTriple t = empty_level(n, Variable::V);
  for (int k = 0; k <= n; ++k) {
    t.A(k, k) = coeff_v(n, k, CoeffV::a2, p);
    t.A(k, k + 1) = coeff_v(n, k, CoeffV::a3, p);
    t.B(k, k) = coeff_v(n, k, CoeffV::b2, p);
    if (k >= 1) {
      t.A(k, k - 1) = coeff_v(n, k, CoeffV::a1, p);
      t.B(k, k - 1) = coeff_v(n, k, CoeffV::b1, p);
      t.C(k, k - 1) = coeff_v(n, k, CoeffV::c1, p);
    }
    if (k <= n - 1) {
      t.B(k, k + 1) = coeff_v(n, k, CoeffV::b3, p);
      t.C(k, k) = coeff_v(n, k, CoeffV::c2, p);
    }
    if (k <= n - 2) t.C(k, k + 1) = coeff_v(n, k, CoeffV::c3, p);
  }
  return t;
}

BlockTridiagonalOperator::BlockTridiagonalOperator(ModelParameters params, OperatorKind kind,
                                                   std::vector<LevelBlockTriple> levels)
    : params_(params), kind_(kind), levels_(std::move(levels)) {
  if (levels_.empty()) throw PreconditionError("operator needs at least one level");
  for (size_t n = 0; n < levels_.size(); ++n) {
    const auto& l = levels_[n];
    const auto rows = static_cast<Eigen::Index>(n + 1);
    if (l.B.rows() != rows || l.B.cols() != rows || l.A.rows() != rows ||
        l.A.cols() != rows + 1 || l.C.rows() != rows || l.C.cols() != rows - 1)
      throw PreconditionError("level block dimensions do not chain");
  }
}

Eigen::VectorXd BlockTridiagonalOperator::apply_right(const Eigen::VectorXd& x) const {
  const int N = truncation();
  if (x.size() != num_states()) throw PreconditionError("vector length mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (int n = 0; n <= N; ++n) {
    const auto& l = levels_[n];
    auto yn = y.segment(state_index(n, 0), n + 1);
    yn += l.B * x.segment(state_index(n, 0), n + 1);
    if (n >= 1) yn += l.C * x.segment(state_index(n - 1, 0), n);
    if (n < N) yn += l.A * x.segment(state_index(n + 1, 0), n + 2);
  }
  return y;
}

Eigen::VectorXd BlockTridiagonalOperator::apply_left(const Eigen::VectorXd& y) const {
  const int N = truncation();
  if (y.size() != num_states()) throw PreconditionError("vector length mismatch");
  Eigen::VectorXd z = Eigen::VectorXd::Zero(y.size());
  for (int n = 0; n <= N; ++n) {
    const auto& l = levels_[n];
    const auto yn = y.segment(state_index(n, 0), n + 1);
    z.segment(state_index(n, 0), n + 1) += l.B.transpose() * yn;
    if (n >= 1) z.segment(state_index(n - 1, 0), n) += l.C.transpose() * yn;
    if (n < N) z.segment(state_index(n + 1, 0), n + 2) += l.A.transpose() * yn;
  }
  return z;
}

Eigen::MatrixXd BlockTridiagonalOperator::to_dense() const {
  const int N = truncation();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(num_states(), num_states());
  for (int n = 0; n <= N; ++n) {
    const auto& l = levels_[n];
    const auto r = state_index(n, 0);
    M.block(r, r, n + 1, n + 1) = l.B;
    if (n >= 1) M.block(r, state_index(n - 1, 0), n + 1, n) = l.C;
    if (n < N) M.block(r, state_index(n + 1, 0), n + 1, n + 2) = l.A;
  }
  return M;
}

Eigen::VectorXd BlockTridiagonalOperator::row_sums(int n) const {
  const auto& l = levels_.at(n);
  Eigen::VectorXd s = l.A.rowwise().sum() + l.B.rowwise().sum();
  if (l.C.cols() > 0) s += l.C.rowwise().sum();
  return s;
}

BlockTridiagonalOperator BlockTridiagonalOperator::combine(double w1,
                                                           const BlockTridiagonalOperator& lhs,
                                                           double w2,
                                                           const BlockTridiagonalOperator& rhs,
                                                           OperatorKind kind,
                                                           ModelParameters params) {
  if (lhs.truncation() != rhs.truncation())
    throw PreconditionError("combined operators must share the truncation level");
  std::vector<LevelBlockTriple> levels;
  levels.reserve(lhs.levels_.size());
  for (size_t n = 0; n < lhs.levels_.size(); ++n) {
    const auto& a = lhs.levels_[n];
    const auto& b = rhs.levels_[n];
    LevelBlockTriple t;
    t.level = a.level;
    t.variable = a.variable == b.variable ? a.variable : Variable::MIXED;
    t.A = w1 * a.A + w2 * b.A;
    t.B = w1 * a.B + w2 * b.B;
    t.C = w1 * a.C + w2 * b.C;
    levels.push_back(std::move(t));
  }
  return BlockTridiagonalOperator(params, kind, std::move(levels));
}

BlockTridiagonalOperator build_operator(OperatorKind kind, int N, const ModelParameters& p) {
  if (N < 0) throw PreconditionError("truncation level must be nonnegative");
  auto build = [N](const ModelParameters& q, bool u, OperatorKind k) {
    std::vector<LevelBlockTriple> levels;
    levels.reserve(N + 1);
    for (int n = 0; n <= N; ++n) levels.push_back(u ? build_level_u(n, q) : build_level_v(n, q));
    return BlockTridiagonalOperator(q, k, std::move(levels));
  };
  switch (kind) {
    case OperatorKind::J1: return build(p, true, kind);
    case OperatorKind::J2: return build(p, false, kind);
    case OperatorKind::J1_TILDE: {
      auto op = build(p.swapped(), true, kind);
      std::vector<LevelBlockTriple> levels = op.levels();
      for (auto& l : levels) l.B -= Eigen::MatrixXd::Identity(l.B.rows(), l.B.cols());
      return BlockTridiagonalOperator(p, kind, std::move(levels));
    }
    case OperatorKind::J2_TILDE: {
      auto op = build(p.swapped(), false, kind);
      return BlockTridiagonalOperator(p, kind, op.levels());
    }
    case OperatorKind::P: {
      const double tau = p.require_tau();
      return BlockTridiagonalOperator::combine(1 - tau, build(p, true, OperatorKind::J1), tau,
                                               build(p, false, OperatorKind::J2), kind, p);
    }
    case OperatorKind::GENERATOR_CANDIDATE: {
      const double tau = p.tau.value_or(1.0);
      return BlockTridiagonalOperator::combine(-tau, build(p, true, OperatorKind::J1), tau,
                                               build(p, false, OperatorKind::J2), kind, p);
    }
  }
  throw PreconditionError("unknown operator kind");
}

}  // namespace qbd
