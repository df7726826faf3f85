#include "laprl/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "laprl/error.hpp"

namespace laprl {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value, got: " + line);
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    }
    cfg.kv_[key] = value;
  }
  cfg.materialize_defaults();
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

std::string RunConfig::get_str(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string v = get_str(key);
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    throw ConfigError("config key " + key + ": not a number: " + v);
  }
  return x;
}

long long RunConfig::get_int(const std::string& key) const {
  const std::string v = get_str(key);
  char* end = nullptr;
  long long x = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') {
    throw ConfigError("config key " + key + ": not an integer: " + v);
  }
  return x;
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string v = get_str(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key " + key + ": not a boolean: " + v);
}

std::vector<int> RunConfig::get_int_list(const std::string& key) const {
  const std::string v = get_str(key);
  std::vector<int> out;
  std::istringstream in(v);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    char* end = nullptr;
    long x = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') {
      throw ConfigError("config key " + key + ": bad list element: " + tok);
    }
    out.push_back(static_cast<int>(x));
  }
  if (out.empty()) throw ConfigError("config key " + key + ": empty list");
  return out;
}

std::vector<std::uint64_t> RunConfig::seeds() const {
  if (has("seeds")) {
    std::vector<std::uint64_t> out;
    for (int s : get_int_list("seeds")) out.push_back(static_cast<std::uint64_t>(s));
    return out;
  }
  auto base = static_cast<std::uint64_t>(get_int("seed"));
  auto n = get_int("num_seeds");
  if (n < 1) throw ConfigError("num_seeds must be >= 1");
  std::vector<std::uint64_t> out;
  for (long long i = 0; i < n; ++i) out.push_back(base + static_cast<std::uint64_t>(i));
  return out;
}

void RunConfig::materialize_defaults() {
  auto def = [&](const char* k, const std::string& v) {
    if (!kv_.count(k)) kv_[k] = v;
  };
  def("env", "nine_rooms");
  def("algorithm", "random");
  def("seed", "0");
  def("num_seeds", "1");
  def("total_steps", "100000");
  def("eval_interval", "1000");
  def("output_dir", "results");

  ControllerConfig c;
  auto fmt = [](double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  };
  def("agent.gamma", fmt(c.gamma));
  def("agent.epsilon_final", fmt(c.epsilon_final));
  def("agent.epsilon_decay_fraction", fmt(c.epsilon_decay_frac));
  def("agent.learning_rate", fmt(c.learning_rate));
  def("agent.n_step", std::to_string(c.n_step));
  def("agent.batch_size", std::to_string(c.batch_size));
  def("agent.buffer_capacity", std::to_string(c.buffer_capacity));
  def("agent.target_sync_period", std::to_string(c.sync_period));
  def("agent.train_interval", std::to_string(c.train_interval));
  def("agent.min_buffer", std::to_string(c.min_buffer_size));
  def("agent.resample_per_learner", c.resample_per_learner ? "true" : "false");
  {
    std::ostringstream os;
    for (std::size_t i = 0; i < c.hidden_widths.size(); ++i) {
      if (i) os << ",";
      os << c.hidden_widths[i];
    }
    def("agent.hidden", os.str());
  }
  def("agent.alpha", fmt(c.alpha));

  def("options.num", std::to_string(c.num_options));
  def("options.mu", fmt(c.mu));
  def("options.duration", std::to_string(c.option_duration));
  def("options.epsilon", fmt(c.epsilon_option));
  def("options.gamma", fmt(c.option_gamma));
  def("options.vi_residual", fmt(c.option_vi_residual));
  def("options.vi_max_sweeps", std::to_string(c.option_vi_max_sweeps));

  def("repr.d", std::to_string(c.repr_d));
  def("repr.beta", fmt(c.repr_beta));
  def("repr.learning_rate", fmt(c.repr_lr));

  def("baseline.count_scale", fmt(c.count_bonus_scale));
  def("baseline.rnd_scale", fmt(c.rnd_bonus_scale));
  def("baseline.ez_k", fmt(c.zeta_k));
  def("baseline.ez_cap", std::to_string(c.zeta_cap));

  def("schedule.switch_step", "-1");

  def("discovery_steps", "0");  // CEO / two-phased DCEO: phase-1 length
}

ControllerConfig RunConfig::controller_config() const {
  ControllerConfig c;
  c.algorithm = parse_algorithm(get_str("algorithm"));
  c.gamma = get_double("agent.gamma");
  c.epsilon_final = get_double("agent.epsilon_final");
  c.epsilon_decay_frac = get_double("agent.epsilon_decay_fraction");
  c.learning_rate = get_double("agent.learning_rate");
  c.n_step = static_cast<int>(get_int("agent.n_step"));
  c.batch_size = static_cast<int>(get_int("agent.batch_size"));
  c.buffer_capacity = static_cast<size_t>(get_int("agent.buffer_capacity"));
  c.sync_period = static_cast<int>(get_int("agent.target_sync_period"));
  c.train_interval = static_cast<int>(get_int("agent.train_interval"));
  c.min_buffer_size = static_cast<size_t>(get_int("agent.min_buffer"));
  c.resample_per_learner = get_bool("agent.resample_per_learner");
  c.hidden_widths = get_int_list("agent.hidden");
  c.alpha = get_double("agent.alpha");

  c.num_options = static_cast<int>(get_int("options.num"));
  c.mu = get_double("options.mu");
  c.option_duration = static_cast<int>(get_int("options.duration"));
  c.epsilon_option = get_double("options.epsilon");
  c.option_gamma = get_double("options.gamma");
  c.option_vi_residual = get_double("options.vi_residual");
  c.option_vi_max_sweeps = static_cast<int>(get_int("options.vi_max_sweeps"));

  c.repr_d = static_cast<int>(get_int("repr.d"));
  c.repr_beta = get_double("repr.beta");
  c.repr_lr = get_double("repr.learning_rate");

  c.count_bonus_scale = get_double("baseline.count_scale");
  c.rnd_bonus_scale = get_double("baseline.rnd_scale");
  c.zeta_k = get_double("baseline.ez_k");
  c.zeta_cap = static_cast<int>(get_int("baseline.ez_cap"));

  c.total_steps = get_int("total_steps");
  c.t_discovery = get_int("discovery_steps");
  return c;
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  for (const auto& [k, v] : kv_) os << k << " = " << v << "\n";
  return os.str();
}

}  // namespace laprl
