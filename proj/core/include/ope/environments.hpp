#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ope/mdp.hpp"
#include "ope/policy.hpp"
#include "ope/trajectory.hpp"

namespace ope {

// ---------------------------------------------------------------------------
// Two-chain MDP where only H consecutive a1 actions earn the single reward.

struct ChainSpec {
  int horizon = 10;
};

inline constexpr ActionId kChainAdvance = 0;  // a1
inline constexpr ActionId kChainDrop = 1;     // a2

// States x_1..x_{H+1} are 0..H, y_1..y_H are H+1..2H. Start state x_1.
TabularMdp chain_mdp(const ChainSpec& spec);
PrimitivePolicy chain_optimal_policy(const ChainSpec& spec);

// ---------------------------------------------------------------------------
// NoisyTaxi: Dietterich's taxi with noisy taxi and passenger observations.

struct GridCell {
  int row = 0;
  int col = 0;
  bool operator==(const GridCell&) const = default;
};

struct TaxiLayout {
  int rows = 5;
  int cols = 5;
  // R, G, Y, B; passenger and destination values index this array.
  std::array<GridCell, 4> landmarks{};
  // A wall on the east side of each listed cell.
  std::vector<GridCell> east_walls;

  static TaxiLayout standard();
  bool blocks_east(int row, int col) const;
  bool operator==(const TaxiLayout&) const = default;
};

// Reads a layout file: {"rows","cols","landmarks":{"R":[r,c],...},"east_walls":[[r,c],...]}.
TaxiLayout load_taxi_layout(const std::string& path);

struct TaxiSpec {
  TaxiLayout layout = TaxiLayout::standard();
  double position_exact = 0.85;       // observed row (column) equals the true one
  double position_off_by_one = 0.075;  // each neighbour, clipped into the grid
  double passenger_flicker = 0.15;     // before pickup: replaced by a random landmark
  double step_reward = -1.0;
  double illegal_reward = -10.0;
  double dropoff_reward = 20.0;
  int horizon_cap = 200;
  bool noisy = true;
};

enum TaxiAction : ActionId { kSouth = 0, kNorth, kEast, kWest, kPickup, kDropoff };
inline constexpr int kTaxiActions = 6;
inline constexpr int kInTaxi = 4;

struct TaxiState {
  int row = 0;
  int col = 0;
  int passenger = 0;  // landmark index, or kInTaxi
  int destination = 0;
  bool operator==(const TaxiState&) const = default;
};

// Observations share the state encoding (noisy row/column/passenger, exact
// destination); the index after all grid states is the absorbing terminal.
int taxi_index(const TaxiLayout& layout, const TaxiState& state);
TaxiState taxi_decode(const TaxiLayout& layout, int index);
int taxi_terminal_index(const TaxiLayout& layout);

TabularMdp noisy_taxi(const TaxiSpec& spec);

// Optimal deterministic policy of the noise-free taxi by finite-horizon dynamic
// programming (lowest action index on ties), applied to observations verbatim.
PrimitivePolicy taxi_optimal_policy(const TaxiSpec& spec);

// Index just past the first successful pickup (a pickup that earned the plain
// step reward), or the trajectory length when none occurs.
std::size_t taxi_pickup_cut(const Trajectory& trajectory, const TaxiSpec& spec);

// Two fixed-length options: "optimal" runs `base`, "random" acts uniformly;
// chosen with probabilities 1 - epsilon and epsilon at every decision.
OptionsPolicy epsilon_greedy_options_policy(const PrimitivePolicy& base, int n_step,
                                            double epsilon);

// ---------------------------------------------------------------------------
// Sub-episode MDP: a 2-step MDP repeated `sub_episodes` times in one episode,
// with a drift term coupling the repetitions.

struct SubEpisodeSpec {
  int sub_episodes = 50;
  double drift = 0.01;   // added to the s2 reward offset on each entry to s2
  double p_e = 0.9;      // evaluation policy's probability of a1
  // false: the k-th s2 reward is -2 + drift * (k - 1); true: -2 + drift * k.
  bool reward_after_increment = false;
};

inline constexpr ObservationId kS1 = 0;
inline constexpr ObservationId kS2 = 1;
inline constexpr ObservationId kS3 = 2;

// Underlying state is (phase, sub-episode index, prior s2 entries); only the
// phase is observed. Every episode lasts exactly 2 * sub_episodes steps.
TabularMdp sub_episode_mdp(const SubEpisodeSpec& spec);

// Uniform behavior policy and an evaluation policy choosing a1 with p_e.
// Rejects p_e outside (0.5, 1).
std::pair<PrimitivePolicy, PrimitivePolicy> sub_episode_policies(double p_e);

}  // namespace ope
