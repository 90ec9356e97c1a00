#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "qbd/block_operator.hpp"
#include "qbd/errors.hpp"

using namespace qbd;
using doctest::Approx;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("level 0 blocks at alpha = beta = gamma = 0") {
  const auto p = ModelParameters::make(0, 0, 0);
  const auto u = build_level_u(0, p);
  CHECK(u.B(0, 0) == Approx(0.5));
  CHECK(u.A(0, 0) == Approx(0.5));
  CHECK(u.A(0, 1) == 0.0);
  CHECK(u.C.cols() == 0);
  const auto v = build_level_v(0, p);
  CHECK(v.B(0, 0) == Approx(0.4));
  CHECK(v.A(0, 0) == Approx(0.0).scale(1.0));
  CHECK(v.A(0, 1) == Approx(0.6));
}

TEST_CASE("block dimensions chain level by level") {
  const auto p = ModelParameters::make(0.3, 1.1, -0.2);
  for (auto kind : {OperatorKind::J1, OperatorKind::J2, OperatorKind::J1_TILDE,
                    OperatorKind::J2_TILDE, OperatorKind::GENERATOR_CANDIDATE}) {
    const auto op = build_operator(kind, 6, p);
    CHECK(op.truncation() == 6);
    CHECK(op.num_states() == 28);
    for (int n = 0; n <= 6; ++n) {
      const auto& l = op.level(n);
      CHECK(l.A.rows() == n + 1);
      CHECK(l.A.cols() == n + 2);
      CHECK(l.B.rows() == n + 1);
      CHECK(l.C.cols() == n);
    }
  }
  std::vector<LevelBlockTriple> bad{build_level_u(0, p), build_level_u(2, p)};
  CHECK_THROWS_AS(BlockTridiagonalOperator(p, OperatorKind::J1, bad), PreconditionError);
  CHECK_THROWS_AS(build_operator(OperatorKind::P, 3, p), PreconditionError);
  CHECK_THROWS_AS(build_operator(OperatorKind::J1, -1, p), PreconditionError);
}

TEST_CASE("sparsity templates of the u and v blocks") {
  testing::ParamGen gen(21);
  for (int t = 0; t < 20; ++t) {
    const auto p = gen.admissible();
    for (int n = 0; n <= 8; ++n) {
      const auto u = build_level_u(n, p);
      for (int r = 0; r <= n; ++r) {
        for (int c = 0; c <= n + 1; ++c)
          if (c != r) CHECK(u.A(r, c) == 0.0);
        for (int c = 0; c <= n; ++c)
          if (std::abs(c - r) > 1) CHECK(u.B(r, c) == 0.0);
        for (int c = 0; c < n; ++c)
          if (c != r) CHECK(u.C(r, c) == 0.0);
      }
      const auto v = build_level_v(n, p);
      for (int r = 0; r <= n; ++r) {
        for (int c = 0; c <= n + 1; ++c)
          if (c < r - 1 || c > r + 1) CHECK(v.A(r, c) == 0.0);
        for (int c = 0; c < n; ++c)
          if (c < r - 1 || c > r + 1) CHECK(v.C(r, c) == 0.0);
      }
    }
  }
}

TEST_CASE("J1 and J2 rows sum to one, tilde operators to 0 and 1") {
  testing::ParamGen gen(22);
  for (int t = 0; t < 50; ++t) {
    const auto p = gen.admissible();
    const int N = gen.integer(0, 12);
    const auto j1 = build_operator(OperatorKind::J1, N, p);
    const auto j2 = build_operator(OperatorKind::J2, N, p);
    const auto t1 = build_operator(OperatorKind::J1_TILDE, N, p);
    const auto t2 = build_operator(OperatorKind::J2_TILDE, N, p);
    for (int n = 0; n <= N; ++n) {
      CHECK((j1.row_sums(n).array() - 1).abs().maxCoeff() < 1e-12);
      CHECK((j2.row_sums(n).array() - 1).abs().maxCoeff() < 1e-12);
      CHECK(t1.row_sums(n).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((t2.row_sums(n).array() - 1).abs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("apply_right, apply_left and to_dense agree") {
  testing::ParamGen gen(23);
  for (int t = 0; t < 20; ++t) {
    const auto p = gen.admissible().with_tau(gen.uniform(0, 1));
    const int N = gen.integer(1, 9);
    const auto op = build_operator(OperatorKind::P, N, p);
    const auto M = op.to_dense();
    Eigen::VectorXd x(op.num_states());
    for (auto& e : x) e = gen.uniform(-1, 1);
    CHECK(max_abs(op.apply_right(x) - M * x) < 1e-13);
    CHECK(max_abs(op.apply_left(x) - M.transpose() * x) < 1e-13);

    // Interior rows keep the constant vector; the last level loses A_N.
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.num_states());
    const Eigen::VectorXd y = op.apply_right(ones);
    const auto last = BlockTridiagonalOperator::state_index(N, 0);
    CHECK((y.head(last).array() - 1).abs().maxCoeff() < 1e-12);
    CHECK(y.tail(N + 1).maxCoeff() <= 1 + 1e-12);
  }
}

TEST_CASE("P and the generator candidate are the stated combinations") {
  testing::ParamGen gen(24);
  for (int t = 0; t < 20; ++t) {
    const double tau = gen.uniform(0, 1);
    const auto p = gen.admissible().with_tau(tau);
    const int N = gen.integer(0, 8);
    const auto j1 = build_operator(OperatorKind::J1, N, p).to_dense();
    const auto j2 = build_operator(OperatorKind::J2, N, p).to_dense();
    const auto P = build_operator(OperatorKind::P, N, p);
    CHECK(P.kind() == OperatorKind::P);
    CHECK(max_abs(P.to_dense() - ((1 - tau) * j1 + tau * j2)) < 1e-14);
    const auto G = build_operator(OperatorKind::GENERATOR_CANDIDATE, N, p).to_dense();
    CHECK(max_abs(G - tau * (j2 - j1)) < 1e-14);
    CHECK(P.level(0).variable == Variable::MIXED);
  }
  const auto p = ModelParameters::make(1, 0, 0);
  const auto a = build_operator(OperatorKind::J1, 2, p);
  const auto b = build_operator(OperatorKind::J2, 3, p);
  CHECK_THROWS_AS(BlockTridiagonalOperator::combine(0.5, a, 0.5, b, OperatorKind::P, p),
                  PreconditionError);
}

TEST_CASE("tilde operators use the swapped exponents") {
  const auto p = ModelParameters::make(0.7, -0.3, 0.4);
  const auto t1 = build_operator(OperatorKind::J1_TILDE, 4, p);
  const auto t2 = build_operator(OperatorKind::J2_TILDE, 4, p);
  for (int n = 0; n <= 4; ++n) {
    const auto u = build_level_u(n, p.swapped());
    const auto v = build_level_v(n, p.swapped());
    CHECK(max_abs(t1.level(n).B - (u.B - Eigen::MatrixXd::Identity(n + 1, n + 1))) == 0.0);
    CHECK(max_abs(t1.level(n).A - u.A) == 0.0);
    CHECK(max_abs(t2.level(n).A - v.A) == 0.0);
    CHECK(max_abs(t2.level(n).B - v.B) == 0.0);
  }
}
