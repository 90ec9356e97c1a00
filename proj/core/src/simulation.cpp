#include "qbd/simulation.hpp"

#include <cmath>
#include <sstream>
#include <thread>

#include "qbd/errors.hpp"

namespace qbd {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool is_nonneg_integer(double x) { return x >= 0 && std::floor(x) == x; }

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::next() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * counter_++); }

double CounterRng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t CounterRng::below(std::uint64_t n) {
  if (n == 0) throw PreconditionError("below(0) has no outcomes");
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

RowAccessor make_row_accessor(const ModelParameters& p) {
  const double tau = p.require_tau();
  return [p, tau](int n, int k) { return transition_row(n, k, p, tau); };
}

ChainState step_chain(const ChainState& state, const RowAccessor& row, CounterRng& rng) {
  const auto entries = row(state.level, state.phase);
  double sum = 0;
  for (const auto& t : entries) {
    if (t.prob < 0) {
      std::ostringstream os;
      os << "negative transition weight " << t.prob << " from (" << state.level << ","
         << state.phase << ")";
      throw PreconditionError(os.str());
    }
    sum += t.prob;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "row (" << state.level << "," << state.phase << ") sums to " << sum;
    throw PreconditionError(os.str());
  }
  const double x = rng.uniform01() * sum;
  double acc = 0;
  for (const auto& t : entries) {
    acc += t.prob;
    if (x < acc) return {t.level, t.phase};
  }
  return {entries.back().level, entries.back().phase};
}

void require_urn_parameters(const ModelParameters& p) {
  if (p.beta != p.alpha) throw PreconditionError("urn model needs beta == alpha");
  if (!is_nonneg_integer(p.alpha) || !is_nonneg_integer(p.gamma))
    throw PreconditionError("urn model needs nonnegative integer alpha and gamma");
}

UrnConfiguration urn_configuration(const ChainState& s, const ModelParameters& p) {
  require_urn_parameters(p);
  if (s.level < 0 || s.phase < 0 || s.phase > s.level)
    throw IndexError("urn state outside 0 <= k <= n");
  const int n = s.level, k = s.phase;
  const int a = static_cast<int>(p.alpha), g = static_cast<int>(p.gamma);
  UrnConfiguration c;
  c.state = s;
  c.u1_blue = n + k + 2 * a + 2 * g + 2;
  c.u1_red = n + k + 2 * a + 1;
  c.u2_blue = n - k + 2 * g + 1;
  c.u2_red = n - k;
  c.same_blue = 2 * n + 4 * a + 2 * g + 3;
  c.same_red = 2 * n + 2 * g + 1;
  c.mixed_blue = k + 2 * a + 1;
  c.mixed_red = k;
  return c;
}

namespace {

// Target of the second draw, or the current state when it does not move.
ChainState urn_target(const ChainState& s, Ball u1, Ball u2, Ball second) {
  if (u1 == Ball::blue && u2 == Ball::blue && second == Ball::blue)
    return {s.level + 1, s.phase};
  if (u1 == Ball::red && u2 == Ball::red && second == Ball::red) return {s.level - 1, s.phase};
  if (u1 == Ball::blue && u2 == Ball::red && second == Ball::blue)
    return {s.level, s.phase + 1};
  if (u1 == Ball::red && u2 == Ball::blue && second == Ball::red)
    return {s.level, s.phase - 1};
  return s;
}

Ball draw(CounterRng& rng, int blue, int red) {
  return rng.below(static_cast<std::uint64_t>(blue + red)) < static_cast<std::uint64_t>(blue)
             ? Ball::blue
             : Ball::red;
}

}  // namespace

std::pair<ChainState, UrnTrace> urn_step(const ChainState& state, const ModelParameters& p,
                                         CounterRng& rng) {
  const UrnConfiguration c = urn_configuration(state, p);
  UrnTrace t;
  t.u1 = draw(rng, c.u1_blue, c.u1_red);
  t.u2 = draw(rng, c.u2_blue, c.u2_red);
  const bool same = t.u1 == t.u2;
  t.ak_blue = same ? c.same_blue : c.mixed_blue;
  t.ak_red = same ? c.same_red : c.mixed_red;
  t.second = draw(rng, t.ak_blue, t.ak_red);
  return {urn_target(state, t.u1, t.u2, t.second), t};
}

std::map<ChainState, Rational> urn_exact_law(const ChainState& state, const ModelParameters& p) {
  const UrnConfiguration c = urn_configuration(state, p);
  std::map<ChainState, Rational> law;
  const Rational t1 = c.u1_blue + c.u1_red;
  const Rational t2 = c.u2_blue + c.u2_red;
  for (Ball u1 : {Ball::blue, Ball::red}) {
    const Rational p1 = (u1 == Ball::blue ? c.u1_blue : c.u1_red) / t1;
    for (Ball u2 : {Ball::blue, Ball::red}) {
      const Rational p2 = (u2 == Ball::blue ? c.u2_blue : c.u2_red) / t2;
      const bool same = u1 == u2;
      const int blue = same ? c.same_blue : c.mixed_blue;
      const int red = same ? c.same_red : c.mixed_red;
      for (Ball second : {Ball::blue, Ball::red}) {
        const Rational p3 = Rational(second == Ball::blue ? blue : red, blue + red);
        const Rational w = p1 * p2 * p3;
        if (w.numerator() == 0) continue;
        law[urn_target(state, u1, u2, second)] += w;
      }
    }
  }
  return law;
}

namespace {

struct Stepper {
  SimulationMode mode;
  ModelParameters params;
  RowAccessor row;

  Stepper(SimulationMode m, const ModelParameters& p) : mode(m), params(p) {
    if (mode == SimulationMode::chain)
      row = make_row_accessor(p);
    else
      require_urn_parameters(p);
  }
  ChainState operator()(const ChainState& s, CounterRng& rng) const {
    if (mode == SimulationMode::chain) return step_chain(s, row, rng);
    return urn_step(s, params, rng).first;
  }
};

void check_initial(const ChainState& s) {
  if (s.level < 0 || s.phase < 0 || s.phase > s.level)
    throw IndexError("initial state outside 0 <= k <= n");
}

}  // namespace

ReplicationResult run_replications(const ReplicationConfig& cfg, const ModelParameters& p) {
  check_initial(cfg.initial);
  if (cfg.steps < 0) throw PreconditionError("step count must be nonnegative");
  const Stepper stepper(cfg.mode, p);
  const unsigned threads = std::max(1u, cfg.threads);
  std::vector<ReplicationResult> partial(threads);
  auto work = [&](unsigned t) {
    ReplicationResult& out = partial[t];
    for (std::uint64_t r = t; r < cfg.replications; r += threads) {
      CounterRng rng(cfg.seed, r);
      ChainState s = cfg.initial;
      for (int step = 0; step < cfg.steps; ++step) {
        const ChainState next = stepper(s, rng);
        ++out.transitions[{s, next}];
        ++out.occupancy[s];
        s = next;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  ReplicationResult total;
  total.replications = cfg.replications;
  total.steps = cfg.steps;
  for (const auto& part : partial) {
    for (const auto& [key, count] : part.transitions) total.transitions[key] += count;
    for (const auto& [key, count] : part.occupancy) total.occupancy[key] += count;
  }
  return total;
}

std::vector<ChainState> simulate_trajectory(const ReplicationConfig& cfg,
                                            const ModelParameters& p,
                                            std::uint64_t replication) {
  check_initial(cfg.initial);
  const Stepper stepper(cfg.mode, p);
  CounterRng rng(cfg.seed, replication);
  std::vector<ChainState> path{cfg.initial};
  for (int step = 0; step < cfg.steps; ++step) path.push_back(stepper(path.back(), rng));
  return path;
}

}  // namespace qbd
