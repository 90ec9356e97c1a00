#ifndef QBD_SIMULATION_HPP_
#define QBD_SIMULATION_HPP_

#include <boost/rational.hpp>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "qbd/parameters.hpp"
#include "qbd/recurrence.hpp"

namespace qbd {

/**
 * Counter-based generator: output i of stream (seed, stream) is a
 * SplitMix64 finalizer applied to a key derived from both plus i. Streams
 * are independent of each other and of the order in which they are used.
 */
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  double uniform01();                     // [0, 1), 53 random bits
  std::uint64_t below(std::uint64_t n);   // uniform on [0, n), rejection sampled
  [[nodiscard]] std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct ChainState {
  int level = 0;
  int phase = 0;
  auto operator<=>(const ChainState&) const = default;
};

using RowAccessor = std::function<std::vector<Transition>(int level, int phase)>;

// Rows of (1 - tau) J1 + tau J2 computed on demand; needs p.tau.
RowAccessor make_row_accessor(const ModelParameters& p);

/**
 * One transition sampled from the row of `state`. PreconditionError if the
 * row has a negative entry or its sum is off by more than 1e-9.
 */
ChainState step_chain(const ChainState& state, const RowAccessor& row, CounterRng& rng);

// Contents of the urns used for one step from state (n,k).
struct UrnConfiguration {
  ChainState state;
  int u1_blue = 0, u1_red = 0;  // n+k+2a+2g+2 and n+k+2a+1
  int u2_blue = 0, u2_red = 0;  // n-k+2g+1 and n-k
  // A_k refill after matching colours / after mixed colours.
  int same_blue = 0, same_red = 0;    // 2n+4a+2g+3 and 2n+2g+1
  int mixed_blue = 0, mixed_red = 0;  // k+2a+1 and k
};

// PreconditionError unless beta == alpha and alpha, gamma are integers >= 0.
void require_urn_parameters(const ModelParameters& p);
UrnConfiguration urn_configuration(const ChainState& s, const ModelParameters& p);

enum class Ball { blue, red };

struct UrnTrace {
  Ball u1 = Ball::blue;
  Ball u2 = Ball::blue;
  int ak_blue = 0;
  int ak_red = 0;
  Ball second = Ball::blue;
};

/**
 * The two-stage draw: one ball from each of U1 and U2, refill A_k according
 * to whether the colours match, draw once from A_k. Blue after (blue,blue)
 * moves to (n+1,k), red after (red,red) to (n-1,k), blue after (blue,red)
 * to (n,k+1), red after (red,blue) to (n,k-1); anything else stays.
 * The urns are refilled from scratch every step.
 */
std::pair<ChainState, UrnTrace> urn_step(const ChainState& state, const ModelParameters& p,
                                         CounterRng& rng);

using Rational = boost::rational<std::int64_t>;

// Exact one-step law of urn_step by enumerating the draw outcomes.
std::map<ChainState, Rational> urn_exact_law(const ChainState& state, const ModelParameters& p);

enum class SimulationMode { chain, urn };

struct ReplicationResult {
  std::map<std::pair<ChainState, ChainState>, std::uint64_t> transitions;
  std::map<ChainState, std::uint64_t> occupancy;  // states at t = 0..T-1
  std::uint64_t replications = 0;
  int steps = 0;
};

struct ReplicationConfig {
  ChainState initial;
  int steps = 1;
  std::uint64_t replications = 1;
  SimulationMode mode = SimulationMode::chain;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/**
 * R independent trajectories; replication r draws from stream r of the
 * master seed, and counts are merged as integers, so the result does not
 * depend on the thread count.
 */
ReplicationResult run_replications(const ReplicationConfig& cfg, const ModelParameters& p);

// A single trajectory (T+1 states) of replication `replication`.
std::vector<ChainState> simulate_trajectory(const ReplicationConfig& cfg,
                                            const ModelParameters& p,
                                            std::uint64_t replication);

}  // namespace qbd

#endif  // QBD_SIMULATION_HPP_
