// Copyright 2026 The Lowpass Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lowpass::grid {

enum class Task { kCuedCatch, kTMaze, kSequenceRecall };

const char* task_name(Task task);
Task parse_task(std::string_view name);

enum class Action : std::uint8_t { kUp = 0, kDown, kLeft, kRight, kStay };
inline constexpr std::size_t kActionCount = 5;

const char* action_name(Action a);
Action action_from_index(std::size_t index);

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

// Binary rows x cols x features array, row-major with features innermost.
struct Observation {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t features = 0;
  std::vector<std::uint8_t> data;

  std::size_t size() const { return data.size(); }
  std::uint8_t at(std::size_t r, std::size_t c, std::size_t f) const {
    return data[(r * cols + c) * features + f];
  }
  std::size_t plane_count(std::size_t f) const;
  bool operator==(const Observation&) const = default;
};

// ---- configuration ----------------------------------------------------------

// Feature planes, in order.
//   Cued Catch:      wall, agent, cyan, yellow, bar_a, bar_b, cue0..cue3, teach
//   T-maze:          wall, agent, cue, teleporter, goal
//   Sequence Recall: wall, agent, light, lit
namespace plane {
inline constexpr std::size_t kWall = 0;
inline constexpr std::size_t kAgent = 1;
// Cued Catch
inline constexpr std::size_t kCyan = 2;
inline constexpr std::size_t kYellow = 3;
inline constexpr std::size_t kBarA = 4;  // always taught alongside cyan
inline constexpr std::size_t kBarB = 5;  // always taught alongside yellow
inline constexpr std::size_t kCue0 = 6;
inline constexpr std::size_t kTeach = 10;
inline constexpr std::size_t kCuedCatchPlanes = 11;
// T-maze
inline constexpr std::size_t kMazeCue = 2;
inline constexpr std::size_t kTeleporter = 3;
inline constexpr std::size_t kGoal = 4;
inline constexpr std::size_t kTMazePlanes = 5;
// Sequence Recall
inline constexpr std::size_t kLight = 2;
inline constexpr std::size_t kLit = 3;
inline constexpr std::size_t kRecallPlanes = 4;
}  // namespace plane

struct CuedCatchConfig {
  std::size_t trials = 100;
  std::size_t reward_free_trials = 40;
  std::size_t trial_length = 7;       // blocks need trial_length - 1 steps
  std::size_t teaching_duration = 10;  // per pairing, 4 pairings
  double catch_reward = 1.0;
};

struct TMazeConfig {
  std::size_t room_steps = 50;  // teleporter opens once this many steps pass
  std::size_t limbo = 280;
  double step_penalty = 0.001;
  double goal_reward = 1.0;
  // Corridor: a top passage 2 * half_width + 1 cells wide with arms of
  // arm_length cells hanging from each end; goals sit at the arm bottoms.
  std::size_t corridor_half_width = 29;
  std::size_t arm_length = 28;
  std::size_t view = 5;  // egocentric window side, odd
  std::size_t max_steps = 1500;
};

struct SequenceRecallConfig {
  std::size_t flash = 60;
  std::size_t gap = 30;  // precedes every flash
  std::size_t sequence_length = 4;
  double step_penalty = 0.005;
  double match_reward = 1.0;
  std::size_t board = 11;           // odd, includes border walls
  std::size_t light_distance = 4;   // from the centre along each axis
  std::size_t max_steps = 1500;
};

struct EnvConfig {
  Task task = Task::kCuedCatch;
  CuedCatchConfig cued_catch;
  TMazeConfig tmaze;
  SequenceRecallConfig recall;

  static EnvConfig for_task(Task task);
  // Observation array dimensions for this task.
  std::array<std::size_t, 3> observation_shape() const;
  // Hard upper bound on episode length.
  std::size_t episode_limit() const;
  void validate() const;
};

// ---- state ------------------------------------------------------------------

struct CuedCatchState {
  std::array<int, 4> association{};     // cue -> 0 (cyan) or 1 (yellow)
  std::array<int, 4> teaching_order{};  // cue shown in pairing j
  std::vector<int> trial_cue;           // per trial
  std::vector<int> cyan_on_top;         // per trial, 1 if cyan uses the top row
  int agent_row = 0;
};

enum class MazePhase { kRoom, kLimbo, kCorridor };

struct TMazeState {
  int goal_side = 0;  // 0 = left, 1 = right
  MazePhase phase = MazePhase::kRoom;
  Cell agent;
  std::size_t room_elapsed = 0;
  std::size_t limbo_left = 0;
};

struct SequenceRecallState {
  std::vector<int> sequence;  // light ids: 0 up, 1 down, 2 left, 3 right
  Cell agent;
  std::size_t traversals = 0;
};

struct EnvState {
  EnvConfig config;
  std::uint64_t seed = 0;
  std::size_t step = 0;
  bool done = false;
  double episode_return = 0.0;
  std::variant<CuedCatchState, TMazeState, SequenceRecallState> task;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
};

// Every per-episode random draw happens here; the rest is deterministic.
EnvState env_new(const EnvConfig& config, std::uint64_t seed);
// Throws std::logic_error after the episode has ended.
StepResult env_step(EnvState& state, Action action);
Observation render(const EnvState& state);
std::string render_ascii(const EnvState& state);

// What a fully informed agent does next.
Action oracle_action(const EnvState& state);

// ---- geometry helpers (shared with tests) -------------------------------------

Cell recall_light_cell(const SequenceRecallConfig& config, int light);
Cell recall_centre(const SequenceRecallConfig& config);
// Goal cell in corridor coordinates for side 0 (left) or 1 (right).
Cell maze_goal_cell(const TMazeConfig& config, int side);
Cell maze_corridor_start(const TMazeConfig& config);
inline constexpr int kCatchTopRow = 3;
inline constexpr int kCatchBottomRow = 7;
inline constexpr int kCatchColumn = 2;

// ---- episodes ---------------------------------------------------------------

struct EpisodeStep {
  Action action = Action::kStay;
  double reward = 0.0;
  bool done = false;
};

// Header comment lines (task, seed, config) and rows step,action,reward,done.
void write_episode_csv(std::ostream& os, const EnvState& initial,
                       const std::vector<EpisodeStep>& steps);

struct Census {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t episodes = 0;
  double standard_error() const;
};

double oracle_return(const EnvConfig& config, std::uint64_t seed);
// Uniform-random actions; episode seeds and action draws are split from `seed`.
Census random_policy_census(const EnvConfig& config, std::uint64_t seed,
                            std::size_t episodes);

}  // namespace lowpass::grid
