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

#include "lowpass/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "lowpass/error.hpp"
#include "lowpass/io.hpp"

namespace lowpass::config {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void flatten(const nlohmann::json& node, const std::string& prefix, Config& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
    return;
  }
  if (prefix.empty()) throw ConfigError("JSON config must be an object");
  if (node.is_string()) {
    out.set(prefix, node.get<std::string>());
  } else if (node.is_boolean()) {
    out.set(prefix, node.get<bool>() ? "true" : "false");
  } else if (node.is_number_integer() || node.is_number_unsigned()) {
    out.set(prefix, node.dump());
  } else if (node.is_number_float()) {
    out.set(prefix, io::format_double(node.get<double>()));
  } else {
    throw ConfigError("unsupported JSON value for key " + prefix);
  }
}

}  // namespace

Config Config::parse_text(std::string_view text) {
  Config cfg;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    cfg.set(section.empty() ? key : section + "." + key,
            std::string(trim(line.substr(eq + 1))));
  }
  return cfg;
}

Config Config::parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON config: ") + e.what());
  }
  Config cfg;
  flatten(doc, "", cfg);
  return cfg;
}

Config Config::parse(std::string_view text) {
  const std::string_view body = trim(text);
  return !body.empty() && body.front() == '{' ? parse_json(text) : parse_text(text);
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Config::set(const std::string& key, std::string value) {
  values_[key] = std::move(value);
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key=value: " + std::string(assignment));
  }
  set(std::string(trim(assignment.substr(0, eq))),
      std::string(trim(assignment.substr(eq + 1))));
}

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  used_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  used_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& s = it->second;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("key " + key + ": expected a number, got '" + s + "'");
  }
  return v;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
  used_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& s = it->second;
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  // Accept integral values written in floating notation, e.g. 4e6.
  double d = 0.0;
  const auto [dptr, dec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (dec == std::errc() && dptr == s.data() + s.size() && d >= 0.0 && d < 1.8e19 &&
      d == static_cast<double>(static_cast<std::uint64_t>(d))) {
    return static_cast<std::uint64_t>(d);
  }
  throw ConfigError("key " + key + ": expected a non-negative integer, got '" + s + "'");
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
  return static_cast<std::size_t>(get_uint(key, fallback));
}

void Config::check_all_used() const {
  std::string unknown;
  for (const auto& [k, v] : values_) {
    if (!used_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
  }
  if (!unknown.empty()) throw ConfigError("unknown config keys: " + unknown);
}

std::string Config::to_text() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

// ---- typed builders ---------------------------------------------------------

namespace {

memory::InterPoolTransform parse_transform(const std::string& s) {
  if (s == "identity") return memory::InterPoolTransform::kIdentity;
  if (s == "orthonormal-tanh") return memory::InterPoolTransform::kOrthonormalTanh;
  throw ConfigError("unknown inter-pool transform: " + s);
}

const char* transform_name(memory::InterPoolTransform t) {
  return t == memory::InterPoolTransform::kIdentity ? "identity" : "orthonormal-tanh";
}

memory::Activation parse_activation(const std::string& s) {
  if (s == "relu") return memory::Activation::kRelu;
  if (s == "tanh") return memory::Activation::kTanh;
  throw ConfigError("unknown readout activation: " + s);
}

const char* activation_name(memory::Activation a) {
  return a == memory::Activation::kRelu ? "relu" : "tanh";
}

std::string num(double v) { return io::format_double(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }

void read_network(const Config& c, memory::NetworkSpec& n) {
  n.pools = c.get_size("net.pools", n.pools);
  n.pool_width = c.get_size("net.pool_width", n.pool_width);
  n.viewport = c.get_size("net.viewport", n.viewport);
  n.hidden = c.get_size("net.hidden", n.hidden);
  n.base = c.get_double("net.base", n.base);
  n.lstm_width = c.get_size("net.lstm_width", n.lstm_width);
  n.gradient_pass_depth = c.get_size("net.gradient_pass_depth", n.gradient_pass_depth);
  n.transform = parse_transform(c.get_string("net.transform", transform_name(n.transform)));
  n.readout_activation =
      parse_activation(c.get_string("net.readout", activation_name(n.readout_activation)));
}

void write_network(const memory::NetworkSpec& n, Config& c) {
  c.set("net.pools", num(std::uint64_t{n.pools}));
  c.set("net.pool_width", num(std::uint64_t{n.pool_width}));
  c.set("net.viewport", num(std::uint64_t{n.viewport}));
  c.set("net.hidden", num(std::uint64_t{n.hidden}));
  c.set("net.base", num(n.base));
  c.set("net.lstm_width", num(std::uint64_t{n.lstm_width}));
  c.set("net.gradient_pass_depth", num(std::uint64_t{n.gradient_pass_depth}));
  c.set("net.transform", transform_name(n.transform));
  c.set("net.readout", activation_name(n.readout_activation));
}

void read_adam(const Config& c, const std::string& prefix, ad::AdamConfig& a) {
  a.learning_rate = c.get_double(prefix + "learning_rate", a.learning_rate);
  a.epsilon = c.get_double(prefix + "epsilon", a.epsilon);
  a.beta1 = c.get_double(prefix + "beta1", a.beta1);
  a.beta2 = c.get_double(prefix + "beta2", a.beta2);
  a.clip_norm = c.get_double(prefix + "clip_norm", a.clip_norm);
}

void write_adam(const ad::AdamConfig& a, const std::string& prefix, Config& c) {
  c.set(prefix + "learning_rate", num(a.learning_rate));
  c.set(prefix + "epsilon", num(a.epsilon));
  c.set(prefix + "beta1", num(a.beta1));
  c.set(prefix + "beta2", num(a.beta2));
  c.set(prefix + "clip_norm", num(a.clip_norm));
}

}  // namespace

train::TrainConfig train_config_from(const Config& c) {
  train::TrainConfig t;
  const auto variant = tasks::parse_variant(
      c.get_string("seq.task", tasks::variant_name(tasks::TaskVariant::kTwoMarker)));
  t.task = variant == tasks::TaskVariant::kThreeMarker ? tasks::TaskSpec::three_marker()
           : variant == tasks::TaskVariant::kSubsequence ? tasks::TaskSpec::subsequence()
                                                          : tasks::TaskSpec::two_marker();
  t.task.min_length = c.get_size("seq.min_length", t.task.min_length);
  t.task.max_length = c.get_size("seq.max_length", t.task.max_length);

  const auto kind = memory::parse_memory_kind(c.get_string("seq.memory", "chain"));
  const std::size_t classes = t.task.class_count();
  t.network = kind == memory::MemoryKind::kLstm
                  ? memory::NetworkSpec::lstm_classifier(32, 32, classes)
                  : memory::NetworkSpec::concrete_classifier(8, 16, 8, 32, 2.0, classes);
  if (kind == memory::MemoryKind::kParallel) {
    t.network = memory::NetworkSpec::parallel_classifier(8, 16, 8, 32, 2.0, classes);
  }
  read_network(c, t.network);
  if (kind == memory::MemoryKind::kParallel) t.network.embedding_width = t.network.pool_width;

  t.batch = c.get_size("seq.batch", t.batch);
  t.truncation = c.get_size("seq.truncation", t.truncation);
  t.budget = c.get_uint("seq.budget", t.budget);
  t.log_every = c.get_size("seq.log_every", t.log_every);
  read_adam(c, "seq.", t.adam);
  t.seed = c.get_uint("run.seed", t.seed);
  t.validate();
  return t;
}

Config to_config(const train::TrainConfig& t) {
  Config c;
  c.set("seq.task", tasks::variant_name(t.task.variant));
  c.set("seq.min_length", num(std::uint64_t{t.task.min_length}));
  c.set("seq.max_length", num(std::uint64_t{t.task.max_length}));
  c.set("seq.memory", memory::memory_kind_name(t.network.memory));
  write_network(t.network, c);
  c.set("seq.batch", num(std::uint64_t{t.batch}));
  c.set("seq.truncation", num(std::uint64_t{t.truncation}));
  c.set("seq.budget", num(t.budget));
  c.set("seq.log_every", num(std::uint64_t{t.log_every}));
  write_adam(t.adam, "seq.", c);
  c.set("run.seed", num(t.seed));
  return c;
}

train::RlConfig rl_config_from(const Config& c) {
  train::RlConfig r;
  r.env = grid::EnvConfig::for_task(grid::parse_task(c.get_string("rl.task", "t-maze")));
  auto& cc = r.env.cued_catch;
  cc.trials = c.get_size("catch.trials", cc.trials);
  cc.reward_free_trials = c.get_size("catch.reward_free_trials", cc.reward_free_trials);
  cc.trial_length = c.get_size("catch.trial_length", cc.trial_length);
  cc.teaching_duration = c.get_size("catch.teaching_duration", cc.teaching_duration);
  cc.catch_reward = c.get_double("catch.catch_reward", cc.catch_reward);
  auto& tm = r.env.tmaze;
  tm.room_steps = c.get_size("tmaze.room_steps", tm.room_steps);
  tm.limbo = c.get_size("tmaze.limbo", tm.limbo);
  tm.step_penalty = c.get_double("tmaze.step_penalty", tm.step_penalty);
  tm.goal_reward = c.get_double("tmaze.goal_reward", tm.goal_reward);
  tm.view = c.get_size("tmaze.view", tm.view);
  tm.corridor_half_width = c.get_size("tmaze.corridor_half_width", tm.corridor_half_width);
  tm.arm_length = c.get_size("tmaze.arm_length", tm.arm_length);
  tm.max_steps = c.get_size("tmaze.max_steps", tm.max_steps);
  auto& sr = r.env.recall;
  sr.flash = c.get_size("recall.flash", sr.flash);
  sr.gap = c.get_size("recall.gap", sr.gap);
  sr.sequence_length = c.get_size("recall.sequence_length", sr.sequence_length);
  sr.step_penalty = c.get_double("recall.step_penalty", sr.step_penalty);
  sr.match_reward = c.get_double("recall.match_reward", sr.match_reward);
  sr.board = c.get_size("recall.board", sr.board);
  sr.light_distance = c.get_size("recall.light_distance", sr.light_distance);
  sr.max_steps = c.get_size("recall.max_steps", sr.max_steps);

  r.memory = memory::parse_memory_kind(c.get_string("rl.memory", "chain"));
  r.pools = c.get_size("rl.pools", r.pools);
  r.rollout = c.get_size("rl.rollout", r.rollout);
  r.block_interval = c.get_size("rl.block_interval", r.block_interval);
  r.gamma = c.get_double("rl.gamma", r.gamma);
  r.entropy_coef = c.get_double("rl.entropy_coef", r.entropy_coef);
  r.value_coef = c.get_double("rl.value_coef", r.value_coef);
  r.env_steps = c.get_uint("rl.env_steps", r.env_steps);
  r.log_every = c.get_size("rl.log_every", r.log_every);
  read_adam(c, "rl.", r.adam);
  r.seed = c.get_uint("run.seed", r.seed);
  r.validate();
  return r;
}

Config to_config(const train::RlConfig& r) {
  Config c;
  c.set("rl.task", grid::task_name(r.env.task));
  const auto& cc = r.env.cued_catch;
  c.set("catch.trials", num(std::uint64_t{cc.trials}));
  c.set("catch.reward_free_trials", num(std::uint64_t{cc.reward_free_trials}));
  c.set("catch.trial_length", num(std::uint64_t{cc.trial_length}));
  c.set("catch.teaching_duration", num(std::uint64_t{cc.teaching_duration}));
  c.set("catch.catch_reward", num(cc.catch_reward));
  const auto& tm = r.env.tmaze;
  c.set("tmaze.room_steps", num(std::uint64_t{tm.room_steps}));
  c.set("tmaze.limbo", num(std::uint64_t{tm.limbo}));
  c.set("tmaze.step_penalty", num(tm.step_penalty));
  c.set("tmaze.goal_reward", num(tm.goal_reward));
  c.set("tmaze.view", num(std::uint64_t{tm.view}));
  c.set("tmaze.corridor_half_width", num(std::uint64_t{tm.corridor_half_width}));
  c.set("tmaze.arm_length", num(std::uint64_t{tm.arm_length}));
  c.set("tmaze.max_steps", num(std::uint64_t{tm.max_steps}));
  const auto& sr = r.env.recall;
  c.set("recall.flash", num(std::uint64_t{sr.flash}));
  c.set("recall.gap", num(std::uint64_t{sr.gap}));
  c.set("recall.sequence_length", num(std::uint64_t{sr.sequence_length}));
  c.set("recall.step_penalty", num(sr.step_penalty));
  c.set("recall.match_reward", num(sr.match_reward));
  c.set("recall.board", num(std::uint64_t{sr.board}));
  c.set("recall.light_distance", num(std::uint64_t{sr.light_distance}));
  c.set("recall.max_steps", num(std::uint64_t{sr.max_steps}));
  c.set("rl.memory", memory::memory_kind_name(r.memory));
  c.set("rl.pools", num(std::uint64_t{r.pools}));
  c.set("rl.rollout", num(std::uint64_t{r.rollout}));
  c.set("rl.block_interval", num(std::uint64_t{r.block_interval}));
  c.set("rl.gamma", num(r.gamma));
  c.set("rl.entropy_coef", num(r.entropy_coef));
  c.set("rl.value_coef", num(r.value_coef));
  c.set("rl.env_steps", num(r.env_steps));
  c.set("rl.log_every", num(std::uint64_t{r.log_every}));
  write_adam(r.adam, "rl.", c);
  c.set("run.seed", num(r.seed));
  return c;
}

}  // namespace lowpass::config
