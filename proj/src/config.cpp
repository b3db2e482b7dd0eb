/*
   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "opuc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace opuc {

namespace {

const std::set<std::string> kKnownSuites = {"supnorm", "martingale", "moments",
                                            "lattice", "sharpness", "oracle"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("config: key '" + key + "' expects a nonnegative integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config: key '" + key + "' expects true/false, got '" + value + "'");
}

std::vector<std::uint64_t> parse_u64_list(const std::string& key, const std::string& value) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(value)) out.push_back(parse_u64(key, item));
  return out;
}

SlowFunction parse_psi(const std::string& value) {
  if (value == "one") return SlowFunction::One;
  if (value == "log") return SlowFunction::Log;
  if (value == "loglog") return SlowFunction::LogLog;
  throw ConfigError("config: envelope.psi must be one|log|loglog, got '" + value + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

std::vector<std::uint64_t> power_of_two_checkpoints(std::uint64_t max_degree) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 1; c <= max_degree; c <<= 1) out.push_back(c);
  if (out.empty() || out.back() != max_degree) out.push_back(max_degree);
  return out;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(line_no) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: line " + std::to_string(line_no) + " has an empty key or value");
    if (!kv.emplace(key, value).second)
      throw ConfigError("config: duplicate key '" + key + "'");
  }

  ExperimentConfig cfg;
  auto take = [&kv](const char* key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) return "";
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  // Envelope.
  const std::string env_kind = take("envelope.kind");
  if (env_kind.empty() || env_kind == "zero") {
    cfg.envelope = Envelope::zero();
  } else if (env_kind == "power") {
    cfg.envelope = Envelope::power_decay(parse_double("envelope.exponent", take("envelope.exponent")),
                                         parse_double("envelope.scale", take("envelope.scale")));
  } else if (env_kind == "sparse") {
    const std::uint64_t T = parse_u64("envelope.T", take("envelope.T"));
    if (T < 2 || T > 0xffffffffull) throw ConfigError("config: envelope.T must be an integer >= 2");
    const std::string psi = take("envelope.psi");
    cfg.envelope = Envelope::sparse_geometric(static_cast<std::uint32_t>(T),
                                              parse_double("envelope.epsilon", take("envelope.epsilon")),
                                              psi.empty() ? SlowFunction::One : parse_psi(psi));
  } else if (env_kind == "explicit") {
    std::vector<double> values;
    for (const auto& item : split_list(take("envelope.values")))
      values.push_back(parse_double("envelope.values", item));
    cfg.envelope = Envelope::explicit_values(std::move(values));
  } else if (env_kind == "geometric") {
    cfg.envelope = Envelope::geometric_decay(parse_double("envelope.ratio", take("envelope.ratio")),
                                             parse_double("envelope.scale", take("envelope.scale")));
  } else {
    throw ConfigError("config: envelope.kind must be zero|power|sparse|explicit|geometric");
  }

  // Randomizer.
  const std::string rnd_kind = take("randomizer.kind");
  const std::string seed_text = take("randomizer.seed");
  const std::uint64_t seed = seed_text.empty() ? 0 : parse_u64("randomizer.seed", seed_text);
  if (rnd_kind.empty() || rnd_kind == "uniform_phase") {
    cfg.randomizer = Randomizer::uniform_phase(seed);
  } else if (rnd_kind == "rademacher") {
    cfg.randomizer = Randomizer::rademacher(seed);
  } else if (rnd_kind == "scaled_uniform_phase") {
    cfg.randomizer = Randomizer::scaled_uniform_phase(
        parse_double("randomizer.radius", take("randomizer.radius")), seed);
  } else {
    throw ConfigError("config: randomizer.kind must be uniform_phase|rademacher|scaled_uniform_phase");
  }

  if (auto v = take("name"); !v.empty()) cfg.name = v;
  if (auto v = take("trajectories"); !v.empty()) cfg.trajectories = parse_u64("trajectories", v);
  if (auto v = take("max_degree"); !v.empty()) cfg.max_degree = parse_u64("max_degree", v);
  if (auto v = take("checkpoints"); !v.empty()) cfg.checkpoints = parse_u64_list("checkpoints", v);
  if (auto v = take("oversample"); !v.empty())
    cfg.oversample = static_cast<unsigned>(parse_u64("oversample", v));
  if (auto v = take("outputs"); !v.empty()) cfg.outputs = v;
  if (auto v = take("suites"); !v.empty()) cfg.suites = split_list(v);
  if (auto v = take("plateau_threshold"); !v.empty())
    cfg.plateau_threshold = parse_double("plateau_threshold", v);

  if (auto v = take("martingale.prefixes"); !v.empty())
    cfg.martingale_prefixes = parse_u64_list("martingale.prefixes", v);
  if (auto v = take("martingale.tails"); !v.empty())
    cfg.martingale_tails = parse_u64_list("martingale.tails", v);
  if (auto v = take("martingale.trials"); !v.empty())
    cfg.martingale_trials = parse_u64("martingale.trials", v);
  if (auto v = take("martingale.points"); !v.empty())
    cfg.martingale_points = static_cast<unsigned>(parse_u64("martingale.points", v));

  if (auto v = take("moments.k"); !v.empty())
    cfg.moments_k = static_cast<std::uint32_t>(parse_u64("moments.k", v));
  if (auto v = take("moments.theta"); !v.empty()) cfg.moments_theta = parse_double("moments.theta", v);
  if (auto v = take("moments.trials"); !v.empty()) cfg.moments_trials = parse_u64("moments.trials", v);

  if (auto v = take("lattice.k_max"); !v.empty())
    cfg.lattice_k_max = static_cast<std::uint32_t>(parse_u64("lattice.k_max", v));
  if (auto v = take("lattice.theta_count"); !v.empty())
    cfg.lattice_theta_count = parse_u64("lattice.theta_count", v);
  if (auto v = take("lattice.repeats"); !v.empty())
    cfg.lattice_repeats = static_cast<std::uint32_t>(parse_u64("lattice.repeats", v));

  if (auto v = take("sharpness.levels"); !v.empty())
    cfg.sharpness_levels = static_cast<std::uint32_t>(parse_u64("sharpness.levels", v));
  if (auto v = take("sharpness.grid"); !v.empty())
    cfg.sharpness_grid = parse_u64("sharpness.grid", v);
  if (auto v = take("sharpness.exploratory"); !v.empty())
    cfg.sharpness_exploratory = parse_bool("sharpness.exploratory", v);

  if (auto v = take("oracle.degrees"); !v.empty())
    cfg.oracle_degrees = parse_u64_list("oracle.degrees", v);

  if (!kv.empty()) throw ConfigError("config: unknown key '" + kv.begin()->first + "'");

  // Validation.
  if (cfg.trajectories < 1) throw ConfigError("config: trajectories must be >= 1");
  if (cfg.oversample < 8) throw ConfigError("config: oversample must be >= 8");
  if (cfg.checkpoints.empty()) cfg.checkpoints = power_of_two_checkpoints(cfg.max_degree);
  if (!std::is_sorted(cfg.checkpoints.begin(), cfg.checkpoints.end()))
    throw ConfigError("config: checkpoints must be sorted ascending");
  if (!cfg.checkpoints.empty() && cfg.checkpoints.back() > cfg.max_degree)
    throw ConfigError("config: checkpoints must not exceed max_degree");
  if (cfg.suites.empty()) cfg.suites = {"supnorm"};
  for (const auto& s : cfg.suites)
    if (!kKnownSuites.count(s)) throw ConfigError("config: unknown suite '" + s + "'");
  if (std::count(cfg.suites.begin(), cfg.suites.end(), "sharpness") &&
      cfg.envelope.kind() != EnvelopeKind::SparseGeometric)
    throw ConfigError("config: the sharpness suite requires a sparse envelope");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::map<std::string, std::string> to_key_values(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["name"] = cfg.name;
  switch (cfg.envelope.kind()) {
    case EnvelopeKind::Zero:
      kv["envelope.kind"] = "zero";
      break;
    case EnvelopeKind::PowerDecay:
      kv["envelope.kind"] = "power";
      kv["envelope.exponent"] = format_double(cfg.envelope.exponent());
      kv["envelope.scale"] = format_double(cfg.envelope.scale());
      break;
    case EnvelopeKind::SparseGeometric:
      kv["envelope.kind"] = "sparse";
      kv["envelope.T"] = std::to_string(cfg.envelope.sparse_base());
      kv["envelope.epsilon"] = format_double(cfg.envelope.epsilon());
      kv["envelope.psi"] = slow_function_name(cfg.envelope.psi());
      break;
    case EnvelopeKind::Explicit: {
      kv["envelope.kind"] = "explicit";
      std::string joined;
      for (std::size_t i = 0; i < cfg.envelope.values().size(); ++i) {
        if (i) joined += ",";
        joined += format_double(cfg.envelope.values()[i]);
      }
      kv["envelope.values"] = joined;
      break;
    }
    case EnvelopeKind::GeometricDecay:
      kv["envelope.kind"] = "geometric";
      kv["envelope.ratio"] = format_double(cfg.envelope.ratio());
      kv["envelope.scale"] = format_double(cfg.envelope.scale());
      break;
  }
  kv["randomizer.kind"] = cfg.randomizer.kind_name();
  kv["randomizer.seed"] = std::to_string(cfg.randomizer.seed());
  if (cfg.randomizer.kind() == MultiplierKind::ScaledUniformPhase)
    kv["randomizer.radius"] = format_double(cfg.randomizer.radius());

  kv["trajectories"] = std::to_string(cfg.trajectories);
  kv["max_degree"] = std::to_string(cfg.max_degree);
  std::string cps;
  for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
    if (i) cps += ",";
    cps += std::to_string(cfg.checkpoints[i]);
  }
  kv["checkpoints"] = cps;
  kv["oversample"] = std::to_string(cfg.oversample);
  kv["outputs"] = cfg.outputs;
  std::string suites;
  for (std::size_t i = 0; i < cfg.suites.size(); ++i) {
    if (i) suites += ",";
    suites += cfg.suites[i];
  }
  kv["suites"] = suites;
  if (cfg.plateau_threshold > 0.0) kv["plateau_threshold"] = format_double(cfg.plateau_threshold);

  auto join_u64 = [](const std::vector<std::uint64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(v[i]);
    }
    return s;
  };
  kv["martingale.prefixes"] = join_u64(cfg.martingale_prefixes);
  kv["martingale.tails"] = join_u64(cfg.martingale_tails);
  kv["martingale.trials"] = std::to_string(cfg.martingale_trials);
  kv["martingale.points"] = std::to_string(cfg.martingale_points);
  kv["moments.k"] = std::to_string(cfg.moments_k);
  kv["moments.theta"] = format_double(cfg.moments_theta);
  kv["moments.trials"] = std::to_string(cfg.moments_trials);
  kv["lattice.k_max"] = std::to_string(cfg.lattice_k_max);
  kv["lattice.theta_count"] = std::to_string(cfg.lattice_theta_count);
  kv["lattice.repeats"] = std::to_string(cfg.lattice_repeats);
  kv["sharpness.levels"] = std::to_string(cfg.sharpness_levels);
  kv["sharpness.grid"] = std::to_string(cfg.sharpness_grid);
  kv["sharpness.exploratory"] = cfg.sharpness_exploratory ? "true" : "false";
  kv["oracle.degrees"] = join_u64(cfg.oracle_degrees);
  return kv;
}

std::string to_config_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : to_key_values(cfg)) {
    out += key;
    out += " = ";
    out += value;
    out += "\n";
  }
  return out;
}

}  // namespace opuc
