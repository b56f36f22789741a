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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lowpass/error.hpp"
#include "lowpass/gridworlds.hpp"
#include "lowpass/rng.hpp"

namespace lowpass::grid {
namespace {

struct Rollout {
  std::vector<double> rewards;
  std::vector<Observation> observations;
  std::vector<EnvState> states;  // state before each step
  double total = 0.0;
};

template <typename Policy>
Rollout play(const EnvConfig& cfg, std::uint64_t seed, Policy policy) {
  Rollout r;
  EnvState s = env_new(cfg, seed);
  r.observations.push_back(render(s));
  while (!s.done) {
    r.states.push_back(s);
    const auto res = env_step(s, policy(s));
    r.rewards.push_back(res.reward);
    r.observations.push_back(res.observation);
    r.total += res.reward;
  }
  return r;
}

Rollout play_oracle(const EnvConfig& cfg, std::uint64_t seed) {
  return play(cfg, seed, [](const EnvState& s) { return oracle_action(s); });
}

Rollout play_random(const EnvConfig& cfg, std::uint64_t seed, std::uint64_t policy_seed) {
  Rng rng(policy_seed);
  return play(cfg, seed, [&](const EnvState&) { return action_from_index(rng.index(5)); });
}

TEST(Tasks, NamesAndParsing) {
  for (auto t : {Task::kCuedCatch, Task::kTMaze, Task::kSequenceRecall}) {
    EXPECT_EQ(parse_task(task_name(t)), t);
  }
  EXPECT_EQ(parse_task("tmaze"), Task::kTMaze);
  EXPECT_THROW(parse_task("pong"), ConfigError);
  EXPECT_THROW(action_from_index(5), ConfigError);
}

TEST(Env, SameSeedSameObservation) {
  for (auto t : {Task::kCuedCatch, Task::kTMaze, Task::kSequenceRecall}) {
    const auto cfg = EnvConfig::for_task(t);
    EXPECT_EQ(render(env_new(cfg, 17)), render(env_new(cfg, 17)));
  }
}

TEST(Env, TrajectoryIsPureFunctionOfSeedAndActions) {
  for (auto t : {Task::kCuedCatch, Task::kTMaze, Task::kSequenceRecall}) {
    const auto cfg = EnvConfig::for_task(t);
    const auto a = play_random(cfg, 5, 6);
    const auto b = play_random(cfg, 5, 6);
    EXPECT_EQ(a.rewards, b.rewards);
    EXPECT_EQ(a.observations, b.observations);
  }
}

TEST(Env, ObservationsAreBinaryWithOneAgent) {
  for (auto t : {Task::kCuedCatch, Task::kTMaze, Task::kSequenceRecall}) {
    const auto cfg = EnvConfig::for_task(t);
    const auto shape = cfg.observation_shape();
    const auto r = play_random(cfg, 3, 4);
    for (const auto& o : r.observations) {
      ASSERT_EQ(o.rows, shape[0]);
      ASSERT_EQ(o.cols, shape[1]);
      ASSERT_EQ(o.features, shape[2]);
      for (auto v : o.data) ASSERT_LE(v, 1);
      ASSERT_EQ(o.plane_count(plane::kAgent), 1u);
    }
  }
}

TEST(Env, EmptyCellHasNoFeatures) {
  const auto o = render(env_new(EnvConfig::for_task(Task::kSequenceRecall), 1));
  // A cell between the centre and the upper light.
  const Cell centre = recall_centre(EnvConfig::for_task(Task::kSequenceRecall).recall);
  bool found = false;
  for (std::size_t f = 0; f < o.features; ++f) {
    found |= o.at(static_cast<std::size_t>(centre.row - 2),
                  static_cast<std::size_t>(centre.col + 1), f) != 0;
  }
  EXPECT_FALSE(found);
}

TEST(Env, StepAfterDoneThrows) {
  auto cfg = EnvConfig::for_task(Task::kTMaze);
  cfg.tmaze.limbo = 2;
  EnvState s = env_new(cfg, 1);
  while (!s.done) env_step(s, oracle_action(s));
  EXPECT_THROW(env_step(s, Action::kStay), std::logic_error);
}

TEST(Env, EpisodesRespectTheLimit) {
  for (auto t : {Task::kCuedCatch, Task::kTMaze, Task::kSequenceRecall}) {
    const auto cfg = EnvConfig::for_task(t);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      EXPECT_LE(play_random(cfg, seed, seed + 100).rewards.size(), cfg.episode_limit());
    }
  }
}

// ---- Cued Catch --------------------------------------------------------------

TEST(CuedCatch, OracleReturnAndEpisodeLength) {
  const auto cfg = EnvConfig::for_task(Task::kCuedCatch);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = play_oracle(cfg, seed);
    EXPECT_EQ(r.total, 60.0);
    EXPECT_EQ(r.rewards.size(), 4u * 10u + 100u * 7u);
  }
}

TEST(CuedCatch, RewardWithheldInRewardFreeTrials) {
  const auto cfg = EnvConfig::for_task(Task::kCuedCatch);
  const auto r = play_oracle(cfg, 2);
  const std::size_t free_steps = 40 + 40 * 7;
  for (std::size_t i = 0; i < free_steps; ++i) EXPECT_EQ(r.rewards[i], 0.0);
  std::size_t paid = 0;
  for (std::size_t i = free_steps; i < r.rewards.size(); ++i) paid += r.rewards[i] == 1.0;
  EXPECT_EQ(paid, 60u);
}

TEST(CuedCatch, AgentOnlyOccupiesTwoPositions) {
  const auto cfg = EnvConfig::for_task(Task::kCuedCatch);
  const auto r = play_random(cfg, 1, 2);
  for (const auto& s : r.states) {
    const int row = std::get<CuedCatchState>(s.task).agent_row;
    EXPECT_TRUE(row == kCatchTopRow || row == kCatchBottomRow);
  }
}

TEST(CuedCatch, AssociationsSplitTwoAndTwo) {
  const auto cfg = EnvConfig::for_task(Task::kCuedCatch);
  std::set<std::array<int, 4>> patterns;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    auto assoc = std::get<CuedCatchState>(env_new(cfg, seed).task).association;
    int cyan = 0;
    for (int a : assoc) cyan += a == 0;
    ASSERT_EQ(cyan, 2);
    // Canonical form: which cues share cue 0's block.
    if (assoc[0] == 1) {
      for (int& a : assoc) a = 1 - a;
    }
    patterns.insert(assoc);
  }
  EXPECT_EQ(patterns.size(), 3u);
}

TEST(CuedCatch, DifficultyKnobIsLive) {
  auto cfg = EnvConfig::for_task(Task::kCuedCatch);
  cfg.cued_catch.reward_free_trials = 10;
  EXPECT_EQ(oracle_return(cfg, 0), 90.0);
  cfg.cued_catch.reward_free_trials = 5;
  EXPECT_EQ(oracle_return(cfg, 0), 95.0);
}

TEST(CuedCatch, RandomPolicyNearThirty) {
  const auto cfg = EnvConfig::for_task(Task::kCuedCatch);
  const Census c = random_policy_census(cfg, 11, 100);
  // Binomial(60, 1/2) has mean 30, standard deviation sqrt(15).
  EXPECT_NEAR(c.mean, 30.0, 3.0 * std::sqrt(15.0) / 10.0);
  EXPECT_NEAR(c.stddev, std::sqrt(15.0), 1.5);
}

// ---- T-maze ------------------------------------------------------------------

TEST(TMaze, OracleReturnJustOverPointSix) {
  const auto cfg = EnvConfig::for_task(Task::kTMaze);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const double r = oracle_return(cfg, seed);
    EXPECT_GT(r, 0.60);
    EXPECT_LT(r, 0.65);
  }
}

TEST(TMaze, LimboFreezesTheAgent) {
  const auto cfg = EnvConfig::for_task(Task::kTMaze);
  EnvState s = env_new(cfg, 4);
  while (std::get<TMazeState>(s.task).phase != MazePhase::kLimbo) {
    env_step(s, oracle_action(s));
  }
  Rng rng(1);
  const Cell pos = std::get<TMazeState>(s.task).agent;
  for (int i = 0; i < 50; ++i) {
    const auto res = env_step(s, action_from_index(rng.index(5)));
    EXPECT_EQ(std::get<TMazeState>(s.task).agent, pos);
    EXPECT_DOUBLE_EQ(res.reward, -0.001);
  }
}

TEST(TMaze, CueOnlyVisibleInTheRoom) {
  const auto cfg = EnvConfig::for_task(Task::kTMaze);
  const auto r = play_oracle(cfg, 9);
  std::size_t room_with_cue = 0;
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    // observation i + 1 follows states[i]; observation 0 precedes it.
    const auto phase = std::get<TMazeState>(r.states[i].task).phase;
    const bool cue = r.observations[i].plane_count(plane::kMazeCue) > 0;
    if (phase == MazePhase::kRoom) {
      room_with_cue += cue;
    } else {
      EXPECT_FALSE(cue) << "step " << i;
    }
  }
  EXPECT_GT(room_with_cue, 0u);
}

TEST(TMaze, WrongGoalCostsOne) {
  const auto cfg = EnvConfig::for_task(Task::kTMaze);
  // Oracle everywhere except the corridor, where it heads for the other arm.
  EnvState s = env_new(cfg, 12);
  const int side = std::get<TMazeState>(s.task).goal_side;
  std::get<TMazeState>(s.task).goal_side = 1 - side;
  double last = 0.0;
  while (!s.done) {
    const Action a = oracle_action(s);
    std::get<TMazeState>(s.task).goal_side = side;
    last = env_step(s, a).reward;
    if (!s.done) std::get<TMazeState>(s.task).goal_side = 1 - side;
  }
  EXPECT_DOUBLE_EQ(last, -1.0 - 0.001);
}

TEST(TMaze, ShorterLimboRaisesTheOracle) {
  auto cfg = EnvConfig::for_task(Task::kTMaze);
  const double long_limbo = oracle_return(cfg, 1);
  cfg.tmaze.limbo = 140;
  EXPECT_NEAR(oracle_return(cfg, 1) - long_limbo, 140 * 0.001, 1e-12);
}

TEST(TMaze, GeometryHelpers) {
  const auto cfg = EnvConfig::for_task(Task::kTMaze).tmaze;
  const Cell left = maze_goal_cell(cfg, 0);
  const Cell right = maze_goal_cell(cfg, 1);
  EXPECT_EQ(left.row, right.row);
  EXPECT_LT(left.col, right.col);
  const Cell start = maze_corridor_start(cfg);
  EXPECT_EQ(start.col - left.col, right.col - start.col);
}

// ---- Sequence Recall ----------------------------------------------------------

TEST(SequenceRecall, OracleReturnJustOverTwo) {
  const auto cfg = EnvConfig::for_task(Task::kSequenceRecall);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double r = oracle_return(cfg, seed);
    EXPECT_GT(r, 2.00);
    EXPECT_LT(r, 2.20);
  }
}

TEST(SequenceRecall, AllSequencesOccur) {
  const auto cfg = EnvConfig::for_task(Task::kSequenceRecall);
  std::set<std::vector<int>> seen;
  for (std::uint64_t seed = 0; seed < 4096; ++seed) {
    seen.insert(std::get<SequenceRecallState>(env_new(cfg, seed).task).sequence);
  }
  EXPECT_EQ(seen.size(), 256u);
}

Action toward(const Cell& from, const Cell& to) {
  if (to.row < from.row) return Action::kUp;
  if (to.row > from.row) return Action::kDown;
  if (to.col < from.col) return Action::kLeft;
  if (to.col > from.col) return Action::kRight;
  return Action::kStay;
}

TEST(SequenceRecall, WrongFirstDiskEarnsOnlyThePenalty) {
  const auto cfg = EnvConfig::for_task(Task::kSequenceRecall);
  EnvState s = env_new(cfg, 3);
  const int wrong = (std::get<SequenceRecallState>(s.task).sequence[0] + 1) % 4;
  const Cell target = recall_light_cell(cfg.recall, wrong);
  double total = 0.0;
  std::size_t steps = 0;
  while (!(std::get<SequenceRecallState>(s.task).agent == target)) {
    const auto res = env_step(s, toward(std::get<SequenceRecallState>(s.task).agent, target));
    EXPECT_DOUBLE_EQ(res.reward, -0.005);
    total += res.reward;
    ASSERT_LT(++steps, 1000u);
  }
  EXPECT_EQ(std::get<SequenceRecallState>(s.task).traversals, 1u);
}

TEST(SequenceRecall, RepeatNeedsExitAndReentry) {
  auto cfg = EnvConfig::for_task(Task::kSequenceRecall);
  // Find a seed whose first two flashes coincide.
  std::uint64_t seed = 0;
  while (true) {
    const auto seq = std::get<SequenceRecallState>(env_new(cfg, seed).task).sequence;
    if (seq[0] == seq[1]) break;
    ++seed;
  }
  EnvState s = env_new(cfg, seed);
  const int light = std::get<SequenceRecallState>(s.task).sequence[0];
  const Cell target = recall_light_cell(cfg.recall, light);
  const std::size_t frozen = cfg.recall.sequence_length * (cfg.recall.gap + cfg.recall.flash);
  while (s.step < frozen) env_step(s, Action::kStay);
  double paid = 0.0;
  while (!(std::get<SequenceRecallState>(s.task).agent == target)) {
    paid += env_step(s, toward(std::get<SequenceRecallState>(s.task).agent, target)).reward;
  }
  // Loitering on the disk does not count again.
  for (int i = 0; i < 5; ++i) paid += env_step(s, Action::kStay).reward;
  EXPECT_EQ(std::get<SequenceRecallState>(s.task).traversals, 1u);
  EXPECT_GT(paid, 0.9);
  EXPECT_LT(paid, 1.0);
}

// ---- censuses and bounds ---------------------------------------------------

TEST(Census, RandomPolicyMatchesIndependentRollouts) {
  for (auto t : {Task::kCuedCatch, Task::kTMaze, Task::kSequenceRecall}) {
    auto cfg = EnvConfig::for_task(t);
    const std::size_t n = 60;
    const Census c = random_policy_census(cfg, 21, n);
    double sum = 0.0, sq = 0.0;
    std::vector<double> mine;
    for (std::size_t e = 0; e < n; ++e) {
      mine.push_back(play_random(cfg, 5000 + e, 9000 + e).total);
      sum += mine.back();
    }
    const double mean = sum / n;
    for (double v : mine) sq += (v - mean) * (v - mean);
    const double se_mine = std::sqrt(sq / (n - 1) / n);
    const double tol = 3.0 * std::hypot(c.standard_error(), se_mine) + 1e-9;
    EXPECT_NEAR(c.mean, mean, tol) << task_name(t);
  }
}

TEST(Census, RandomNeverBeatsTheOracle) {
  for (auto t : {Task::kCuedCatch, Task::kTMaze, Task::kSequenceRecall}) {
    const auto cfg = EnvConfig::for_task(t);
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      EXPECT_LE(play_random(cfg, seed, seed * 7 + 1).total, oracle_return(cfg, seed) + 1e-12);
    }
  }
}

TEST(Census, ScriptedLoiterNeverBeatsTheOracle) {
  for (auto t : {Task::kCuedCatch, Task::kTMaze, Task::kSequenceRecall}) {
    const auto cfg = EnvConfig::for_task(t);
    const auto r = play(cfg, 2, [](const EnvState&) { return Action::kStay; });
    EXPECT_LE(r.total, oracle_return(cfg, 2));
  }
}

// ---- records ------------------------------------------------------------------

TEST(EpisodeCsv, HeaderAndRows) {
  auto cfg = EnvConfig::for_task(Task::kTMaze);
  cfg.tmaze.limbo = 3;
  EnvState s = env_new(cfg, 8);
  const EnvState initial = s;
  std::vector<EpisodeStep> steps;
  while (!s.done) {
    const Action a = oracle_action(s);
    const auto res = env_step(s, a);
    steps.push_back({a, res.reward, res.done});
  }
  std::ostringstream os;
  write_episode_csv(os, initial, steps);
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("# lowpass-csv v1 episode", 0), 0u);
  EXPECT_NE(text.find("# task=t-maze"), std::string::npos);
  EXPECT_NE(text.find("# seed=8"), std::string::npos);
  EXPECT_NE(text.find("step,action,reward,done"), std::string::npos);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  EXPECT_GT(lines, steps.size());
}

TEST(Render, AsciiHasOneLinePerRow) {
  const auto cfg = EnvConfig::for_task(Task::kCuedCatch);
  const EnvState s = env_new(cfg, 0);
  const std::string art = render_ascii(s);
  std::size_t lines = 0;
  for (char c : art) lines += c == '\n';
  EXPECT_EQ(lines, cfg.observation_shape()[0]);
}

TEST(Config, InvalidGeometryRejected) {
  auto cfg = EnvConfig::for_task(Task::kSequenceRecall);
  cfg.recall.board = 4;
  EXPECT_THROW(env_new(cfg, 0), ConfigError);
  auto maze = EnvConfig::for_task(Task::kTMaze);
  maze.tmaze.view = 4;
  EXPECT_THROW(env_new(maze, 0), ConfigError);
}

}  // namespace
}  // namespace lowpass::grid
