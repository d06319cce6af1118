#include "trajan/config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "trajan/errors.hpp"
#include "trajan/numeric.hpp"

namespace trajan::config {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string token;
  while (ss >> token) tokens.push_back(token);
  return tokens;
}

double require_double(const std::string& token, const std::string& key) {
  auto value = numeric::parse_double(token);
  if (!value) raise(ErrorCode::ConfigError, "config key " + key + ": bad number '" + token + "'");
  return *value;
}

long long require_int(const std::string& token, const std::string& key) {
  auto value = numeric::parse_integer(token);
  if (!value) raise(ErrorCode::ConfigError, "config key " + key + ": bad integer '" + token + "'");
  return *value;
}

void expect_values(const std::vector<std::string>& tokens, size_t count) {
  if (tokens.size() != count + 1) {
    raise(ErrorCode::ConfigError, "config key " + tokens[0] + ": expected " +
                                      std::to_string(count) + " value(s), got " +
                                      std::to_string(tokens.size() - 1));
  }
}

}  // namespace

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = tokenize(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    if (!saw_header) {
      if (tokens[0] != "config") {
        raise(ErrorCode::ConfigError, "config file must start with a 'config' line");
      }
      saw_header = true;
      continue;
    }
    const std::string& key = tokens[0];
    if (key == "confidence_threshold") {
      expect_values(tokens, 1);
      cfg.tracker.confidence_threshold = require_double(tokens[1], key);
    } else if (key == "gate") {
      expect_values(tokens, 1);
      cfg.tracker.gate = require_double(tokens[1], key);
      if (cfg.tracker.gate < 0.0 || cfg.tracker.gate > 1.0) {
        raise(ErrorCode::ConfigError, "gate must lie in [0, 1]");
      }
    } else if (key == "process_noise") {
      expect_values(tokens, 4);
      for (int i = 0; i < 4; ++i) {
        cfg.tracker.process_noise_diag(i) = require_double(tokens[1 + i], key);
      }
    } else if (key == "measurement_noise") {
      expect_values(tokens, 2);
      for (int i = 0; i < 2; ++i) {
        cfg.tracker.measurement_noise_diag(i) = require_double(tokens[1 + i], key);
      }
    } else if (key == "initial_velocity_variance") {
      expect_values(tokens, 1);
      cfg.tracker.initial_velocity_variance = require_double(tokens[1], key);
    } else if (key == "confirm_hits") {
      expect_values(tokens, 1);
      cfg.tracker.confirm_hits = static_cast<int>(require_int(tokens[1], key));
    } else if (key == "max_misses") {
      expect_values(tokens, 1);
      cfg.tracker.max_misses = static_cast<int>(require_int(tokens[1], key));
    } else if (key == "min_trajectory_len") {
      expect_values(tokens, 1);
      cfg.tracker.min_trajectory_len = static_cast<int>(require_int(tokens[1], key));
    } else if (key == "border_margin") {
      expect_values(tokens, 1);
      cfg.tracker.border_margin = require_double(tokens[1], key);
    } else if (key == "error_threshold") {
      expect_values(tokens, 1);
      cfg.sweep.error_threshold = require_double(tokens[1], key);
    } else if (key == "degree_lo") {
      expect_values(tokens, 1);
      cfg.sweep.degree_lo = static_cast<int>(require_int(tokens[1], key));
    } else if (key == "degree_hi") {
      expect_values(tokens, 1);
      cfg.sweep.degree_hi = static_cast<int>(require_int(tokens[1], key));
    } else if (key == "condition_limit") {
      expect_values(tokens, 1);
      cfg.sweep.condition_limit = require_double(tokens[1], key);
    } else if (key == "degree_threshold") {
      expect_values(tokens, 1);
      cfg.degree_threshold = static_cast<int>(require_int(tokens[1], key));
      if (cfg.degree_threshold < 0) raise(ErrorCode::ConfigError, "degree_threshold must be >= 0");
    } else if (key == "window") {
      expect_values(tokens, 1);
      cfg.window_size = static_cast<int>(require_int(tokens[1], key));
      if (cfg.window_size < 0) raise(ErrorCode::ConfigError, "window must be >= 0");
    } else if (key == "min_setup_vehicles") {
      expect_values(tokens, 1);
      cfg.min_setup_vehicles = static_cast<int>(require_int(tokens[1], key));
    } else if (key == "domain_margin") {
      expect_values(tokens, 1);
      cfg.domain_margin = require_double(tokens[1], key);
    } else {
      raise(ErrorCode::ConfigError, "unknown config key '" + key + "'");
    }
  }
  if (!saw_header) raise(ErrorCode::ConfigError, "empty config file");
  if (cfg.sweep.degree_lo < 1 || cfg.sweep.degree_hi > 20 ||
      cfg.sweep.degree_lo > cfg.sweep.degree_hi) {
    raise(ErrorCode::ConfigError, "degree range must satisfy 1 <= degree_lo <= degree_hi <= 20");
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open config file " + path);
  return parse_config(in);
}

void write_config(std::ostream& out, const PipelineConfig& cfg) {
  using numeric::format_double;
  out << "config\n";
  out << "confidence_threshold " << format_double(cfg.tracker.confidence_threshold) << "\n";
  out << "gate " << format_double(cfg.tracker.gate) << "\n";
  out << "process_noise";
  for (int i = 0; i < 4; ++i) out << " " << format_double(cfg.tracker.process_noise_diag(i));
  out << "\n";
  out << "measurement_noise";
  for (int i = 0; i < 2; ++i) out << " " << format_double(cfg.tracker.measurement_noise_diag(i));
  out << "\n";
  out << "initial_velocity_variance " << format_double(cfg.tracker.initial_velocity_variance)
      << "\n";
  out << "confirm_hits " << cfg.tracker.confirm_hits << "\n";
  out << "max_misses " << cfg.tracker.max_misses << "\n";
  out << "min_trajectory_len " << cfg.tracker.min_trajectory_len << "\n";
  out << "border_margin " << format_double(cfg.tracker.border_margin) << "\n";
  out << "error_threshold " << format_double(cfg.sweep.error_threshold) << "\n";
  out << "degree_lo " << cfg.sweep.degree_lo << "\n";
  out << "degree_hi " << cfg.sweep.degree_hi << "\n";
  out << "condition_limit " << format_double(cfg.sweep.condition_limit) << "\n";
  out << "degree_threshold " << cfg.degree_threshold << "\n";
  out << "window " << cfg.window_size << "\n";
  out << "min_setup_vehicles " << cfg.min_setup_vehicles << "\n";
  out << "domain_margin " << format_double(cfg.domain_margin) << "\n";
}

}  // namespace trajan::config
