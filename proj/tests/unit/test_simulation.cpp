#include <doctest.h>

#include <cmath>
#include <set>

#include "generators.hpp"
#include "qbd/errors.hpp"
#include "qbd/recurrence.hpp"
#include "qbd/simulation.hpp"

using namespace qbd;
using doctest::Approx;

namespace {

double to_d(const Rational& r) { return double(r.numerator()) / double(r.denominator()); }

// Largest |count - R p| / sqrt(R p (1 - p)) over the row from `from`.
double worst_z(const ReplicationResult& res, const ChainState& from,
               const std::vector<Transition>& row) {
  const double R = double(res.occupancy.at(from));
  double worst = 0;
  std::uint64_t seen = 0;
  for (const auto& t : row) {
    const auto it = res.transitions.find({from, {t.level, t.phase}});
    const double c = it == res.transitions.end() ? 0.0 : double(it->second);
    seen += static_cast<std::uint64_t>(c);
    const double sd = std::sqrt(R * t.prob * (1 - t.prob));
    if (sd > 0) worst = std::max(worst, std::abs(c - R * t.prob) / sd);
  }
  CHECK(seen == res.occupancy.at(from));  // nothing outside the row
  return worst;
}

}  // namespace

TEST_CASE("counter-based generator") {
  CounterRng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  CHECK(x != d.next());
  CHECK(a.counter() == 1);
  std::set<std::uint64_t> hits;
  double mean = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = a.uniform01();
    CHECK((u >= 0 && u < 1));
    mean += u;
    const auto k = a.below(7);
    CHECK(k < 7u);
    hits.insert(k);
  }
  CHECK(hits.size() == 7u);
  CHECK(mean / 20000 == Approx(0.5).epsilon(0.02));
  CHECK_THROWS_AS(a.below(0), PreconditionError);
}

TEST_CASE("urn contents") {
  const auto p = ModelParameters::make(1, 1, 2);
  const auto c = urn_configuration({3, 1}, p);
  CHECK(c.u1_blue == 3 + 1 + 2 + 4 + 2);
  CHECK(c.u1_red == 3 + 1 + 2 + 1);
  CHECK(c.u2_blue == 2 + 4 + 1);
  CHECK(c.u2_red == 2);
  CHECK(c.same_blue == 6 + 4 + 4 + 3);
  CHECK(c.same_red == 6 + 4 + 1);
  CHECK(c.mixed_blue == 1 + 2 + 1);
  CHECK(c.mixed_red == 1);
  CHECK_THROWS_AS(urn_configuration({3, 1}, ModelParameters::make(1, 0, 2)), PreconditionError);
  CHECK_THROWS_AS(urn_configuration({3, 1}, ModelParameters::make(0.5, 0.5, 2)), PreconditionError);
  CHECK_THROWS_AS(urn_configuration({1, 2}, p), IndexError);
}

TEST_CASE("exact urn law equals the row of J1 at beta = alpha") {
  for (int a = 0; a <= 2; ++a)
    for (int g = 0; g <= 2; ++g) {
      const auto p = ModelParameters::make(a, a, g);
      for (int n = 0; n <= 5; ++n)
        for (int k = 0; k <= n; ++k) {
          const auto law = urn_exact_law({n, k}, p);
          Rational total = 0;
          for (const auto& [s, w] : law) total += w;
          CHECK(total == Rational(1));
          CHECK(to_d(law.at({n, k})) == Approx(0.5).epsilon(1e-15));
          const auto row = transition_row(n, k, p, 0.0);
          CHECK(row.size() == law.size());
          for (const auto& t : row) {
            const auto it = law.find({t.level, t.phase});
            REQUIRE(it != law.end());
            CHECK(std::abs(to_d(it->second) - t.prob) < 1e-12);
          }
        }
    }
  // From (0,0) with alpha = gamma = 0 the urn moves up or stays, each with probability 1/2.
  const auto law = urn_exact_law({0, 0}, ModelParameters::make(0, 0, 0));
  CHECK(law.size() == 2u);
  CHECK(law.at({1, 0}) == Rational(1, 2));
}

TEST_CASE("urn_step traces follow the colour rules") {
  const auto p = ModelParameters::make(1, 1, 1);
  CounterRng rng(5, 0);
  for (int i = 0; i < 2000; ++i) {
    const ChainState s{4, 2};
    const auto [next, t] = urn_step(s, p, rng);
    const bool same = t.u1 == t.u2;
    const auto c = urn_configuration(s, p);
    CHECK(t.ak_blue == (same ? c.same_blue : c.mixed_blue));
    if (next.level == 5) CHECK((t.u1 == Ball::blue && same && t.second == Ball::blue));
    if (next.level == 3) CHECK((t.u1 == Ball::red && same && t.second == Ball::red));
    if (next.phase == 3) CHECK((t.u1 == Ball::blue && !same && t.second == Ball::blue));
    if (next.phase == 1) CHECK((t.u1 == Ball::red && !same && t.second == Ball::red));
  }
}

TEST_CASE("replications do not depend on the thread count") {
  const auto p = ModelParameters::make(0.5, 1.5, 0.2, 0.4);
  ReplicationConfig cfg;
  cfg.initial = {2, 1};
  cfg.steps = 25;
  cfg.replications = 3000;
  cfg.seed = 99;
  cfg.threads = 1;
  const auto one = run_replications(cfg, p);
  cfg.threads = 4;
  const auto four = run_replications(cfg, p);
  CHECK(one.transitions == four.transitions);
  CHECK(one.occupancy == four.occupancy);
  std::uint64_t total = 0;
  for (const auto& [s, c] : one.occupancy) total += c;
  CHECK(total == 3000u * 25u);

  // A trajectory reproduces the transitions of its replication.
  cfg.replications = 1;
  cfg.threads = 1;
  const auto single = run_replications(cfg, p);
  const auto path = simulate_trajectory(cfg, p, 0);
  REQUIRE(path.size() == 26u);
  std::map<std::pair<ChainState, ChainState>, std::uint64_t> counted;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) ++counted[{path[i], path[i + 1]}];
  CHECK(counted == single.transitions);
  CHECK(simulate_trajectory(cfg, p, 0) == path);
}

TEST_CASE("one-step chain frequencies match the row") {
  testing::ParamGen gen(61);
  for (int t = 0; t < 4; ++t) {
    const auto base = gen.in_region(Region::A);
    const auto p = base.with_tau(gen.uniform(0, 1));
    const ChainState from{gen.integer(1, 5), 0};
    ReplicationConfig cfg;
    cfg.initial = {from.level, gen.integer(0, from.level)};
    cfg.steps = 1;
    cfg.replications = 200000;
    cfg.seed = 1000 + t;
    cfg.threads = 2;
    const auto res = run_replications(cfg, p);
    const auto row = transition_row(cfg.initial.level, cfg.initial.phase, p, *p.tau);
    CHECK(worst_z(res, cfg.initial, row) < 4.5);
  }
}

TEST_CASE("urn and chain sample the same one-step law") {
  const auto p = ModelParameters::make(1, 1, 1, 0.0);
  ReplicationConfig cfg;
  cfg.initial = {3, 1};
  cfg.steps = 1;
  cfg.replications = 200000;
  cfg.seed = 7;
  cfg.mode = SimulationMode::chain;
  const auto chain = run_replications(cfg, p);
  cfg.mode = SimulationMode::urn;
  cfg.seed = 8;
  const auto urn = run_replications(cfg, p);
  const auto row = transition_row(3, 1, p, 0.0);
  for (const auto& t : row) {
    const std::pair<ChainState, ChainState> key{cfg.initial, {t.level, t.phase}};
    const double a = chain.transitions.count(key) ? double(chain.transitions.at(key)) : 0.0;
    const double b = urn.transitions.count(key) ? double(urn.transitions.at(key)) : 0.0;
    const double R = double(cfg.replications);
    const double sd = std::sqrt(2 * R * t.prob * (1 - t.prob));
    CHECK(std::abs(a - b) < 4.5 * sd);
  }
  CHECK(worst_z(urn, cfg.initial, row) < 4.5);
}

TEST_CASE("simulation preconditions") {
  const auto p = ModelParameters::make(0, 0, 0, 0.5);
  ReplicationConfig cfg;
  cfg.initial = {1, 2};
  CHECK_THROWS_AS(run_replications(cfg, p), IndexError);
  cfg.initial = {1, 0};
  cfg.steps = -1;
  CHECK_THROWS_AS(run_replications(cfg, p), PreconditionError);
  cfg.steps = 1;
  CHECK_THROWS_AS(run_replications(cfg, ModelParameters::make(0, 0, 0)), PreconditionError);
  CounterRng rng(1, 1);
  RowAccessor negative = [](int, int) {
    return std::vector<Transition>{{0, 0, 1.2}, {1, 0, -0.2}};
  };
  CHECK_THROWS_AS(step_chain({0, 0}, negative, rng), PreconditionError);
  RowAccessor short_row = [](int, int) { return std::vector<Transition>{{0, 0, 0.9}}; };
  CHECK_THROWS_AS(step_chain({0, 0}, short_row, rng), PreconditionError);
  // A stochastic chain started past tau_max hits a negative row.
  const auto bad = ModelParameters::make(1, 0, 0, 0.9);
  cfg.initial = {2, 0};
  cfg.steps = 1;
  CHECK_THROWS_AS(run_replications(cfg, bad), PreconditionError);
}
