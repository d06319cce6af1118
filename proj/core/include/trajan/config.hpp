#pragma once

#include <iosfwd>
#include <string>

#include "trajan/anomaly.hpp"
#include "trajan/routes.hpp"
#include "trajan/tracking.hpp"

namespace trajan::config {

/// Every tunable constant of the pipeline in one place. The defaults are the
/// operating profile the acceptance suite runs with; a config file overrides
/// individual keys.
struct PipelineConfig {
  tracking::TrackerConfig tracker;
  anomaly::SweepConfig sweep;
  int degree_threshold = 2;   // |degree diff| above this is an anomaly
  int window_size = 5;        // past same-route trajectories merged at runtime
  int min_setup_vehicles = 20;
  double domain_margin = routes::kDomainMargin;
};

/// Key-value text config, one `key value...` pair per line, '#' comments.
/// Unknown keys fail loudly (they are always typos).
PipelineConfig parse_config(std::istream& in);

PipelineConfig load_config(const std::string& path);

void write_config(std::ostream& out, const PipelineConfig& cfg);

}  // namespace trajan::config
