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

#include "lowpass/gridworlds.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lowpass/error.hpp"
#include "lowpass/io.hpp"
#include "lowpass/rng.hpp"

namespace lowpass::grid {

const char* task_name(Task task) {
  switch (task) {
    case Task::kCuedCatch: return "cued-catch";
    case Task::kTMaze: return "t-maze";
    case Task::kSequenceRecall: return "sequence-recall";
  }
  return "unknown";
}

Task parse_task(std::string_view name) {
  if (name == "cued-catch" || name == "cued_catch") return Task::kCuedCatch;
  if (name == "t-maze" || name == "tmaze" || name == "t_maze") return Task::kTMaze;
  if (name == "sequence-recall" || name == "sequence_recall") {
    return Task::kSequenceRecall;
  }
  throw ConfigError("unknown task id: " + std::string(name));
}

const char* action_name(Action a) {
  switch (a) {
    case Action::kUp: return "up";
    case Action::kDown: return "down";
    case Action::kLeft: return "left";
    case Action::kRight: return "right";
    case Action::kStay: return "stay";
  }
  return "?";
}

Action action_from_index(std::size_t index) {
  if (index >= kActionCount) throw ConfigError("action index out of range");
  return static_cast<Action>(index);
}

std::size_t Observation::plane_count(std::size_t f) const {
  std::size_t n = 0;
  for (std::size_t i = f; i < data.size(); i += features) n += data[i];
  return n;
}

namespace {

constexpr int kCatchBoard = 11;
constexpr int kCatchCueRow = 9;
constexpr int kCatchCueCol = 5;
constexpr int kCatchBarRow = 8;
constexpr int kRoomSize = 7;  // 5 x 5 interior plus walls
constexpr Cell kRoomStart{3, 3};
constexpr Cell kTeleporter{0, 3};

Cell moved(Cell c, Action a) {
  switch (a) {
    case Action::kUp: return {c.row - 1, c.col};
    case Action::kDown: return {c.row + 1, c.col};
    case Action::kLeft: return {c.row, c.col - 1};
    case Action::kRight: return {c.row, c.col + 1};
    case Action::kStay: return c;
  }
  return c;
}

class Canvas {
 public:
  Canvas(std::size_t rows, std::size_t cols, std::size_t features) {
    obs_.rows = rows;
    obs_.cols = cols;
    obs_.features = features;
    obs_.data.assign(rows * cols * features, 0);
  }
  void set(int r, int c, std::size_t f) {
    if (r < 0 || c < 0 || r >= static_cast<int>(obs_.rows) ||
        c >= static_cast<int>(obs_.cols)) {
      return;
    }
    obs_.data[(static_cast<std::size_t>(r) * obs_.cols + static_cast<std::size_t>(c)) *
                  obs_.features + f] = 1;
  }
  void border() {
    const int rows = static_cast<int>(obs_.rows);
    const int cols = static_cast<int>(obs_.cols);
    for (int c = 0; c < cols; ++c) {
      set(0, c, plane::kWall);
      set(rows - 1, c, plane::kWall);
    }
    for (int r = 0; r < rows; ++r) {
      set(r, 0, plane::kWall);
      set(r, cols - 1, plane::kWall);
    }
  }
  Observation take() { return std::move(obs_); }

 private:
  Observation obs_;
};

// ---- Cued Catch --------------------------------------------------------------

std::size_t teaching_steps(const CuedCatchConfig& c) { return 4 * c.teaching_duration; }
std::size_t catch_total(const CuedCatchConfig& c) {
  return teaching_steps(c) + c.trials * c.trial_length;
}

Observation render_catch(const EnvState& state, const CuedCatchState& s) {
  const auto& cfg = state.config.cued_catch;
  Canvas canvas(kCatchBoard, kCatchBoard, plane::kCuedCatchPlanes);
  canvas.border();
  canvas.set(s.agent_row, kCatchColumn, plane::kAgent);
  const std::size_t teach = teaching_steps(cfg);
  if (state.step < teach) {
    const int cue = s.teaching_order[state.step / cfg.teaching_duration];
    canvas.set(kCatchCueRow, kCatchCueCol, plane::kCue0 + static_cast<std::size_t>(cue));
    const std::size_t bar = s.association[static_cast<std::size_t>(cue)] == 0
                                ? plane::kBarA
                                : plane::kBarB;
    for (int c = 3; c <= 7; ++c) canvas.set(kCatchBarRow, c, bar);
    for (int r = kCatchTopRow; r <= kCatchBottomRow; ++r) {
      canvas.set(r, kCatchColumn - 1, plane::kTeach);
      canvas.set(r, kCatchColumn + 1, plane::kTeach);
    }
  } else if (state.step < catch_total(cfg)) {
    const std::size_t trial = (state.step - teach) / cfg.trial_length;
    const std::size_t s_in = (state.step - teach) % cfg.trial_length;
    const int col = kCatchColumn + static_cast<int>(cfg.trial_length - 1 - s_in);
    const bool cyan_top = s.cyan_on_top[trial] != 0;
    canvas.set(cyan_top ? kCatchTopRow : kCatchBottomRow, col, plane::kCyan);
    canvas.set(cyan_top ? kCatchBottomRow : kCatchTopRow, col, plane::kYellow);
    canvas.set(kCatchCueRow, kCatchCueCol,
               plane::kCue0 + static_cast<std::size_t>(s.trial_cue[trial]));
  }
  return canvas.take();
}

double step_catch(EnvState& state, CuedCatchState& s, Action action) {
  const auto& cfg = state.config.cued_catch;
  if (action == Action::kUp) s.agent_row = kCatchTopRow;
  if (action == Action::kDown) s.agent_row = kCatchBottomRow;
  double reward = 0.0;
  const std::size_t teach = teaching_steps(cfg);
  if (state.step >= teach) {
    const std::size_t trial = (state.step - teach) / cfg.trial_length;
    const std::size_t s_in = (state.step - teach) % cfg.trial_length;
    if (s_in + 1 == cfg.trial_length) {
      const bool cyan_top = s.cyan_on_top[trial] != 0;
      const bool want_cyan = s.association[static_cast<std::size_t>(s.trial_cue[trial])] == 0;
      const int target = (want_cyan == cyan_top) ? kCatchTopRow : kCatchBottomRow;
      if (s.agent_row == target && trial >= cfg.reward_free_trials) {
        reward = cfg.catch_reward;
      }
    }
  }
  ++state.step;
  if (state.step >= catch_total(cfg)) state.done = true;
  return reward;
}

Action oracle_catch(const EnvState& state, const CuedCatchState& s) {
  const auto& cfg = state.config.cued_catch;
  const std::size_t teach = teaching_steps(cfg);
  if (state.step < teach) return Action::kStay;
  const std::size_t trial = (state.step - teach) / cfg.trial_length;
  const bool cyan_top = s.cyan_on_top[trial] != 0;
  const bool want_cyan = s.association[static_cast<std::size_t>(s.trial_cue[trial])] == 0;
  return want_cyan == cyan_top ? Action::kUp : Action::kDown;
}

// ---- T-maze -----------------------------------------------------------------

bool corridor_open(const TMazeConfig& c, Cell p) {
  const int right = 2 * static_cast<int>(c.corridor_half_width) + 1;
  if (p.row == 1 && p.col >= 1 && p.col <= right) return true;
  const bool arm = p.col == 1 || p.col == right;
  return arm && p.row >= 1 && p.row <= static_cast<int>(c.arm_length) + 1;
}

int room_cue_col(int side) { return side == 0 ? 1 : kRoomSize - 2; }

bool room_is_cue(const TMazeState& s, Cell p) {
  return p.col == room_cue_col(s.goal_side) && p.row >= 2 && p.row <= 4;
}

bool room_open(const TMazeState& s, Cell p) {
  return p.row >= 1 && p.row <= kRoomSize - 2 && p.col >= 1 && p.col <= kRoomSize - 2 &&
         !room_is_cue(s, p);
}

bool teleporter_open(const TMazeConfig& c, const TMazeState& s) {
  return s.room_elapsed >= c.room_steps;
}

Observation render_maze(const EnvState& state, const TMazeState& s) {
  const auto& cfg = state.config.tmaze;
  const int v = static_cast<int>(cfg.view);
  const int half = v / 2;
  Canvas canvas(cfg.view, cfg.view, plane::kTMazePlanes);
  for (int dr = -half; dr <= half; ++dr) {
    for (int dc = -half; dc <= half; ++dc) {
      const int r = dr + half;
      const int c = dc + half;
      if (dr == 0 && dc == 0) {
        canvas.set(r, c, plane::kAgent);
        continue;
      }
      const Cell p{s.agent.row + dr, s.agent.col + dc};
      switch (s.phase) {
        case MazePhase::kLimbo:
          canvas.set(r, c, plane::kWall);
          break;
        case MazePhase::kRoom:
          if (p == kTeleporter && teleporter_open(cfg, s)) {
            canvas.set(r, c, plane::kTeleporter);
          } else if (room_is_cue(s, p)) {
            canvas.set(r, c, plane::kMazeCue);
          } else if (!room_open(s, p)) {
            canvas.set(r, c, plane::kWall);
          }
          break;
        case MazePhase::kCorridor:
          if (p == maze_goal_cell(cfg, 0) || p == maze_goal_cell(cfg, 1)) {
            canvas.set(r, c, plane::kGoal);
          } else if (!corridor_open(cfg, p)) {
            canvas.set(r, c, plane::kWall);
          }
          break;
      }
    }
  }
  return canvas.take();
}

double step_maze(EnvState& state, TMazeState& s, Action action) {
  const auto& cfg = state.config.tmaze;
  double reward = -cfg.step_penalty;
  switch (s.phase) {
    case MazePhase::kRoom: {
      const Cell next = moved(s.agent, action);
      if (next == kTeleporter && teleporter_open(cfg, s)) {
        if (cfg.limbo > 0) {
          s.phase = MazePhase::kLimbo;
          s.limbo_left = cfg.limbo;
        } else {
          s.phase = MazePhase::kCorridor;
          s.agent = maze_corridor_start(cfg);
        }
      } else if (room_open(s, next)) {
        s.agent = next;
      }
      ++s.room_elapsed;
      break;
    }
    case MazePhase::kLimbo:
      if (--s.limbo_left == 0) {
        s.phase = MazePhase::kCorridor;
        s.agent = maze_corridor_start(cfg);
      }
      break;
    case MazePhase::kCorridor: {
      const Cell next = moved(s.agent, action);
      if (corridor_open(cfg, next)) s.agent = next;
      for (int side = 0; side < 2; ++side) {
        if (s.agent == maze_goal_cell(cfg, side)) {
          reward += side == s.goal_side ? cfg.goal_reward : -cfg.goal_reward;
          state.done = true;
        }
      }
      break;
    }
  }
  ++state.step;
  if (state.step >= cfg.max_steps) state.done = true;
  return reward;
}

Action oracle_maze(const EnvState& state, const TMazeState& s) {
  const auto& cfg = state.config.tmaze;
  switch (s.phase) {
    case MazePhase::kRoom:
      if (s.agent.col != kTeleporter.col) {
        return s.agent.col < kTeleporter.col ? Action::kRight : Action::kLeft;
      }
      if (s.agent.row > 1 || teleporter_open(cfg, s)) return Action::kUp;
      return Action::kStay;
    case MazePhase::kLimbo:
      return Action::kStay;
    case MazePhase::kCorridor: {
      const Cell goal = maze_goal_cell(cfg, s.goal_side);
      if (s.agent.col != goal.col) {
        if (s.agent.row != 1) return Action::kUp;
        return s.agent.col < goal.col ? Action::kRight : Action::kLeft;
      }
      return s.agent.row < goal.row ? Action::kDown : Action::kUp;
    }
  }
  return Action::kStay;
}

// ---- Sequence Recall ----------------------------------------------------------

std::size_t recall_frozen(const SequenceRecallConfig& c) {
  return c.sequence_length * (c.gap + c.flash);
}

int light_at(const SequenceRecallConfig& c, Cell p) {
  for (int light = 0; light < 4; ++light) {
    if (recall_light_cell(c, light) == p) return light;
  }
  return -1;
}

bool recall_open(const SequenceRecallConfig& c, Cell p) {
  const int n = static_cast<int>(c.board);
  return p.row >= 1 && p.col >= 1 && p.row <= n - 2 && p.col <= n - 2;
}

// Light currently flashing, or -1.
int recall_lit(const SequenceRecallConfig& c, std::size_t step,
               const std::vector<int>& sequence) {
  if (step >= recall_frozen(c)) return -1;
  const std::size_t period = c.gap + c.flash;
  const std::size_t n = step / period;
  return step % period >= c.gap ? sequence[n] : -1;
}

Observation render_recall(const EnvState& state, const SequenceRecallState& s) {
  const auto& cfg = state.config.recall;
  Canvas canvas(cfg.board, cfg.board, plane::kRecallPlanes);
  canvas.border();
  for (int light = 0; light < 4; ++light) {
    const Cell p = recall_light_cell(cfg, light);
    canvas.set(p.row, p.col, plane::kLight);
  }
  const int lit = recall_lit(cfg, state.step, s.sequence);
  if (lit >= 0) {
    const Cell p = recall_light_cell(cfg, lit);
    canvas.set(p.row, p.col, plane::kLit);
  }
  canvas.set(s.agent.row, s.agent.col, plane::kAgent);
  return canvas.take();
}

double step_recall(EnvState& state, SequenceRecallState& s, Action action) {
  const auto& cfg = state.config.recall;
  double reward = -cfg.step_penalty;
  if (state.step >= recall_frozen(cfg)) {
    const Cell next = moved(s.agent, action);
    if (next != s.agent && recall_open(cfg, next)) {
      const bool was_on_light = light_at(cfg, s.agent) >= 0;
      s.agent = next;
      const int light = light_at(cfg, next);
      if (light >= 0 && !was_on_light) {
        if (s.sequence[s.traversals] == light) reward += cfg.match_reward;
        if (++s.traversals == cfg.sequence_length) state.done = true;
      }
    }
  }
  ++state.step;
  if (state.step >= cfg.max_steps) state.done = true;
  return reward;
}

// First move of a shortest path from `from` to `to` that avoids other lights.
Action path_step(const SequenceRecallConfig& cfg, Cell from, Cell to) {
  const int n = static_cast<int>(cfg.board);
  std::vector<int> first(static_cast<std::size_t>(n * n), -1);
  auto id = [n](Cell p) { return static_cast<std::size_t>(p.row * n + p.col); };
  std::deque<Cell> queue{from};
  first[id(from)] = static_cast<int>(Action::kStay);
  while (!queue.empty()) {
    const Cell p = queue.front();
    queue.pop_front();
    if (p == to) return static_cast<Action>(first[id(p)]);
    for (int a = 0; a < 4; ++a) {
      const Cell q = moved(p, static_cast<Action>(a));
      if (!recall_open(cfg, q) || first[id(q)] != -1) continue;
      if (q != to && light_at(cfg, q) >= 0) continue;
      first[id(q)] = p == from ? a : first[id(p)];
      queue.push_back(q);
    }
  }
  return Action::kStay;
}

Action oracle_recall(const EnvState& state, const SequenceRecallState& s) {
  const auto& cfg = state.config.recall;
  if (state.step < recall_frozen(cfg)) return Action::kStay;
  const Cell target = recall_light_cell(cfg, s.sequence[s.traversals]);
  if (s.agent == target) {
    // Repeat: step off towards the centre, then come back.
    const Cell centre = recall_centre(cfg);
    if (s.agent.row != centre.row) {
      return s.agent.row < centre.row ? Action::kDown : Action::kUp;
    }
    return s.agent.col < centre.col ? Action::kRight : Action::kLeft;
  }
  return path_step(cfg, s.agent, target);
}

std::string describe(const EnvConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  switch (cfg.task) {
    case Task::kCuedCatch: {
      const auto& c = cfg.cued_catch;
      os << "trials=" << c.trials << " reward_free_trials=" << c.reward_free_trials
         << " trial_length=" << c.trial_length
         << " teaching_duration=" << c.teaching_duration
         << " catch_reward=" << c.catch_reward;
      break;
    }
    case Task::kTMaze: {
      const auto& c = cfg.tmaze;
      os << "room_steps=" << c.room_steps << " limbo=" << c.limbo
         << " step_penalty=" << c.step_penalty << " goal_reward=" << c.goal_reward
         << " corridor_half_width=" << c.corridor_half_width
         << " arm_length=" << c.arm_length << " view=" << c.view
         << " max_steps=" << c.max_steps;
      break;
    }
    case Task::kSequenceRecall: {
      const auto& c = cfg.recall;
      os << "flash=" << c.flash << " gap=" << c.gap
         << " sequence_length=" << c.sequence_length
         << " step_penalty=" << c.step_penalty << " match_reward=" << c.match_reward
         << " board=" << c.board << " light_distance=" << c.light_distance
         << " max_steps=" << c.max_steps;
      break;
    }
  }
  return os.str();
}

}  // namespace

// ---- public API -------------------------------------------------------------

EnvConfig EnvConfig::for_task(Task task) {
  EnvConfig cfg;
  cfg.task = task;
  return cfg;
}

std::array<std::size_t, 3> EnvConfig::observation_shape() const {
  switch (task) {
    case Task::kCuedCatch: return {11, 11, plane::kCuedCatchPlanes};
    case Task::kTMaze: return {tmaze.view, tmaze.view, plane::kTMazePlanes};
    case Task::kSequenceRecall: return {recall.board, recall.board, plane::kRecallPlanes};
  }
  return {0, 0, 0};
}

std::size_t EnvConfig::episode_limit() const {
  switch (task) {
    case Task::kCuedCatch: return catch_total(cued_catch);
    case Task::kTMaze: return tmaze.max_steps;
    case Task::kSequenceRecall: return recall.max_steps;
  }
  return 0;
}

void EnvConfig::validate() const {
  switch (task) {
    case Task::kCuedCatch: {
      const auto& c = cued_catch;
      if (c.trials < 1) throw ConfigError("cued catch needs at least one trial");
      if (c.reward_free_trials > c.trials) {
        throw ConfigError("reward_free_trials exceeds trials");
      }
      // Blocks start trial_length - 1 columns right of the agent.
      if (c.trial_length < 1 || kCatchColumn + static_cast<int>(c.trial_length) - 1 > 9) {
        throw ConfigError("trial_length must lie in [1, 8] on the 11 x 11 board");
      }
      break;
    }
    case Task::kTMaze: {
      const auto& c = tmaze;
      if (c.corridor_half_width < 1 || c.arm_length < 1) {
        throw ConfigError("corridor half width and arm length must be positive");
      }
      if (c.view < 3 || c.view % 2 == 0) throw ConfigError("view must be odd and >= 3");
      // Oracle needs 2 room moves, limbo, then the corridor path.
      const std::size_t oracle_steps = std::max<std::size_t>(c.room_steps, 2) + 1 +
                                       c.limbo + c.corridor_half_width + c.arm_length;
      if (c.max_steps < oracle_steps) {
        throw ConfigError("max_steps too small for the maze geometry");
      }
      break;
    }
    case Task::kSequenceRecall: {
      const auto& c = recall;
      if (c.sequence_length < 1) throw ConfigError("sequence_length must be >= 1");
      if (c.board < 5 || c.board % 2 == 0) throw ConfigError("board must be odd and >= 5");
      if (c.light_distance < 1 || 2 * c.light_distance + 3 > c.board) {
        throw ConfigError("lights must sit inside the board");
      }
      if (c.max_steps <= recall_frozen(c)) {
        throw ConfigError("max_steps leaves no time to move");
      }
      break;
    }
  }
}

Cell recall_centre(const SequenceRecallConfig& c) {
  const int mid = static_cast<int>(c.board) / 2;
  return {mid, mid};
}

Cell recall_light_cell(const SequenceRecallConfig& c, int light) {
  const Cell centre = recall_centre(c);
  const int d = static_cast<int>(c.light_distance);
  switch (light) {
    case 0: return {centre.row - d, centre.col};
    case 1: return {centre.row + d, centre.col};
    case 2: return {centre.row, centre.col - d};
    case 3: return {centre.row, centre.col + d};
    default: throw ConfigError("light id out of range");
  }
}

Cell maze_goal_cell(const TMazeConfig& c, int side) {
  const int row = static_cast<int>(c.arm_length) + 1;
  return {row, side == 0 ? 1 : 2 * static_cast<int>(c.corridor_half_width) + 1};
}

Cell maze_corridor_start(const TMazeConfig& c) {
  return {1, static_cast<int>(c.corridor_half_width) + 1};
}

EnvState env_new(const EnvConfig& config, std::uint64_t seed) {
  config.validate();
  EnvState state;
  state.config = config;
  state.seed = seed;
  Rng rng(seed);
  switch (config.task) {
    case Task::kCuedCatch: {
      CuedCatchState s;
      // Two of the four cues go with cyan.
      const std::size_t first = rng.index(4);
      std::size_t second = rng.index(3);
      if (second >= first) ++second;
      s.association.fill(1);
      s.association[first] = 0;
      s.association[second] = 0;
      s.teaching_order = {0, 1, 2, 3};
      for (std::size_t i = 3; i > 0; --i) {
        std::swap(s.teaching_order[i], s.teaching_order[rng.index(i + 1)]);
      }
      const auto& cc = config.cued_catch;
      s.trial_cue.resize(cc.trials);
      s.cyan_on_top.resize(cc.trials);
      for (std::size_t t = 0; t < cc.trials; ++t) {
        s.trial_cue[t] = static_cast<int>(rng.index(4));
        s.cyan_on_top[t] = rng.bernoulli(0.5) ? 1 : 0;
      }
      s.agent_row = kCatchTopRow;
      state.task = std::move(s);
      break;
    }
    case Task::kTMaze: {
      TMazeState s;
      s.goal_side = rng.bernoulli(0.5) ? 1 : 0;
      s.agent = kRoomStart;
      state.task = s;
      break;
    }
    case Task::kSequenceRecall: {
      SequenceRecallState s;
      s.sequence.resize(config.recall.sequence_length);
      for (auto& light : s.sequence) light = static_cast<int>(rng.index(4));
      s.agent = recall_centre(config.recall);
      state.task = std::move(s);
      break;
    }
  }
  return state;
}

StepResult env_step(EnvState& state, Action action) {
  if (state.done) throw std::logic_error("env_step called after the episode ended");
  if (static_cast<std::size_t>(action) >= kActionCount) {
    throw ConfigError("invalid action");
  }
  double reward = 0.0;
  std::visit(
      [&](auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, CuedCatchState>) {
          reward = step_catch(state, s, action);
        } else if constexpr (std::is_same_v<S, TMazeState>) {
          reward = step_maze(state, s, action);
        } else {
          reward = step_recall(state, s, action);
        }
      },
      state.task);
  state.episode_return += reward;
  return StepResult{render(state), reward, state.done};
}

Observation render(const EnvState& state) {
  return std::visit(
      [&](const auto& s) -> Observation {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, CuedCatchState>) {
          return render_catch(state, s);
        } else if constexpr (std::is_same_v<S, TMazeState>) {
          return render_maze(state, s);
        } else {
          return render_recall(state, s);
        }
      },
      state.task);
}

Action oracle_action(const EnvState& state) {
  return std::visit(
      [&](const auto& s) -> Action {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, CuedCatchState>) {
          return oracle_catch(state, s);
        } else if constexpr (std::is_same_v<S, TMazeState>) {
          return oracle_maze(state, s);
        } else {
          return oracle_recall(state, s);
        }
      },
      state.task);
}

std::string render_ascii(const EnvState& state) {
  const Observation obs = render(state);
  // Highest-priority plane wins a cell.
  std::string glyphs;
  std::vector<std::size_t> order;
  switch (state.config.task) {
    case Task::kCuedCatch:
      glyphs = "#@CYABwxyzT";
      order = {1, 2, 3, 6, 7, 8, 9, 4, 5, 10, 0};
      break;
    case Task::kTMaze:
      glyphs = "#@c^G";
      order = {1, 2, 3, 4, 0};
      break;
    case Task::kSequenceRecall:
      glyphs = "#@o*";
      order = {1, 3, 2, 0};
      break;
  }
  std::string out;
  for (std::size_t r = 0; r < obs.rows; ++r) {
    for (std::size_t c = 0; c < obs.cols; ++c) {
      char ch = '.';
      for (std::size_t f : order) {
        if (obs.at(r, c, f)) {
          ch = glyphs[f];
          break;
        }
      }
      out.push_back(ch);
    }
    out.push_back('\n');
  }
  return out;
}

void write_episode_csv(std::ostream& os, const EnvState& initial,
                       const std::vector<EpisodeStep>& steps) {
  os << "# lowpass-csv " << io::kCsvVersion << " episode\n";
  os << "# task=" << task_name(initial.config.task) << '\n';
  os << "# seed=" << initial.seed << '\n';
  os << "# config " << describe(initial.config) << '\n';
  os << "step,action,reward,done\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    os << i << ',' << action_name(steps[i].action) << ','
       << io::format_double(steps[i].reward) << ',' << (steps[i].done ? 1 : 0) << '\n';
  }
}

double Census::standard_error() const {
  return episodes > 0 ? stddev / std::sqrt(static_cast<double>(episodes)) : 0.0;
}

double oracle_return(const EnvConfig& config, std::uint64_t seed) {
  EnvState state = env_new(config, seed);
  while (!state.done) env_step(state, oracle_action(state));
  return state.episode_return;
}

Census random_policy_census(const EnvConfig& config, std::uint64_t seed,
                            std::size_t episodes) {
  Rng policy(derive_seed(seed, SeedStream::kPolicy));
  std::vector<double> returns;
  returns.reserve(episodes);
  for (std::size_t e = 0; e < episodes; ++e) {
    EnvState state = env_new(config, derive_seed(seed, SeedStream::kCensus, e));
    while (!state.done) env_step(state, action_from_index(policy.index(kActionCount)));
    returns.push_back(state.episode_return);
  }
  Census census;
  census.episodes = episodes;
  if (episodes == 0) return census;
  double sum = 0.0;
  for (double r : returns) sum += r;
  census.mean = sum / static_cast<double>(episodes);
  double sq = 0.0;
  for (double r : returns) sq += (r - census.mean) * (r - census.mean);
  census.stddev = episodes > 1 ? std::sqrt(sq / static_cast<double>(episodes - 1)) : 0.0;
  return census;
}

}  // namespace lowpass::grid
