#include "trajan/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>

#include "trajan/errors.hpp"
#include "trajan/numeric.hpp"

namespace trajan::io {

namespace {

using numeric::format_double;

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

[[noreturn]] void bad(const char* format, size_t line_no, const std::string& message) {
  raise(ErrorCode::MalformedRecord,
        std::string(format) + " line " + std::to_string(line_no) + ": " + message);
}

double need_double(std::string_view token, const char* format, size_t line_no) {
  auto value = numeric::parse_double(token);
  if (!value) bad(format, line_no, "expected a number, got '" + std::string(token) + "'");
  return *value;
}

long long need_int(std::string_view token, const char* format, size_t line_no) {
  auto value = numeric::parse_integer(token);
  if (!value) bad(format, line_no, "expected an integer, got '" + std::string(token) + "'");
  return *value;
}

/// Line iterator that strips CR, counts lines, and skips blanks and comments.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& out) {
    while (std::getline(in_, out)) {
      ++line_no_;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      size_t first = out.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      if (out[first] == '#') continue;
      return true;
    }
    return false;
  }

  size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  size_t line_no_ = 0;
};

/// Reads the header into the caller's line buffer so the returned views stay
/// valid while the caller consumes the header fields.
void expect_header(LineReader& reader, const char* format, const char* keyword, std::string& line,
                   std::vector<std::string_view>& tokens) {
  if (!reader.next(line)) bad(format, reader.line_no(), "empty file");
  tokens = split(line);
  if (tokens.empty() || tokens[0] != keyword) {
    bad(format, reader.line_no(), std::string("expected '") + keyword + "' header");
  }
}

sim::IncidentSpec::Kind parse_kind(std::string_view token, const char* format, size_t line_no) {
  if (token == "stall") return sim::IncidentSpec::Kind::Stall;
  if (token == "swerve") return sim::IncidentSpec::Kind::Swerve;
  if (token == "obstacle") return sim::IncidentSpec::Kind::Obstacle;
  bad(format, line_no, "unknown incident kind '" + std::string(token) + "'");
}

sim::IncidentSpec parse_incident_tokens(std::span<const std::string_view> tokens,
                                        const char* format, size_t line_no) {
  if (tokens.size() != 6) {
    bad(format, line_no, "incident lines take kind, route, start, duration, magnitude");
  }
  sim::IncidentSpec incident;
  incident.kind = parse_kind(tokens[1], format, line_no);
  incident.route_id = std::string(tokens[2]);
  incident.start_time = need_double(tokens[3], format, line_no);
  incident.duration = need_double(tokens[4], format, line_no);
  incident.magnitude = need_double(tokens[5], format, line_no);
  return incident;
}

void append_incident_line(std::string& out, const sim::IncidentSpec& incident) {
  out += "incident ";
  out += sim::to_string(incident.kind);
  out += ' ';
  out += incident.route_id;
  out += ' ';
  out += format_double(incident.start_time);
  out += ' ';
  out += format_double(incident.duration);
  out += ' ';
  out += format_double(incident.magnitude);
  out += '\n';
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path);
  return in;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) raise(ErrorCode::IoError, "cannot read " + path);
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) raise(ErrorCode::IoError, "cannot write " + path);
}

// --------------------------------------------------------------- lens files

LensFile parse_lens(std::istream& in) {
  constexpr const char* kFormat = "lens";
  LineReader reader(in);
  std::string line;
  std::vector<std::string_view> tokens;
  expect_header(reader, kFormat, "lens", line, tokens);

  std::optional<Point2> center;
  std::optional<int> order;
  std::vector<double> coefficients;
  std::optional<double> valid_radius;
  double residual_rms = 0.0;

  while (reader.next(line)) {
    tokens = split(line);
    size_t n = reader.line_no();
    if (tokens[0] == "center" && tokens.size() == 3) {
      center = Point2{need_double(tokens[1], kFormat, n), need_double(tokens[2], kFormat, n)};
    } else if (tokens[0] == "order" && tokens.size() == 2) {
      order = static_cast<int>(need_int(tokens[1], kFormat, n));
    } else if (tokens[0] == "coefficients" && tokens.size() >= 2) {
      coefficients.clear();
      for (size_t i = 1; i < tokens.size(); ++i) {
        coefficients.push_back(need_double(tokens[i], kFormat, n));
      }
    } else if (tokens[0] == "valid_radius" && tokens.size() == 2) {
      valid_radius = need_double(tokens[1], kFormat, n);
    } else if (tokens[0] == "residual_rms" && tokens.size() == 2) {
      residual_rms = need_double(tokens[1], kFormat, n);
    } else {
      bad(kFormat, n, "unrecognized line '" + line + "'");
    }
  }
  if (!center || coefficients.empty() || !valid_radius) {
    bad(kFormat, reader.line_no(), "missing center, coefficients, or valid_radius");
  }
  if (order && *order != static_cast<int>(coefficients.size()) - 1) {
    bad(kFormat, reader.line_no(), "declared order disagrees with the coefficient count");
  }
  return LensFile{geometry::DistortionModel(*center, std::move(coefficients), *valid_radius),
                  residual_rms};
}

LensFile load_lens(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_lens(in);
}

std::string serialize_lens(const geometry::DistortionModel& model, double residual_rms) {
  std::string out = "lens\n";
  out += "center " + format_double(model.center().x) + ' ' + format_double(model.center().y) + '\n';
  out += "order " + std::to_string(model.order()) + '\n';
  out += "coefficients";
  for (double c : model.coefficients()) out += ' ' + format_double(c);
  out += '\n';
  out += "valid_radius " + format_double(model.valid_radius()) + '\n';
  out += "residual_rms " + format_double(residual_rms) + '\n';
  return out;
}

// -------------------------------------------------------------- pairs files

PairsFile parse_pairs(std::istream& in) {
  constexpr const char* kFormat = "pairs";
  LineReader reader(in);
  std::string line;
  std::vector<std::string_view> tokens;
  expect_header(reader, kFormat, "pairs", line, tokens);

  PairsFile file;
  while (reader.next(line)) {
    tokens = split(line);
    size_t n = reader.line_no();
    if (tokens[0] == "center" && tokens.size() == 3) {
      file.center = Point2{need_double(tokens[1], kFormat, n), need_double(tokens[2], kFormat, n)};
    } else if (tokens[0] == "order" && tokens.size() == 2) {
      file.order = static_cast<int>(need_int(tokens[1], kFormat, n));
    } else if (tokens.size() == 4) {
      geometry::CorrespondencePair pair;
      pair.fisheye = {need_double(tokens[0], kFormat, n), need_double(tokens[1], kFormat, n)};
      pair.birdeye = {need_double(tokens[2], kFormat, n), need_double(tokens[3], kFormat, n)};
      file.pairs.push_back(pair);
    } else {
      bad(kFormat, n, "expected 'center', 'order', or a four-number correspondence row");
    }
  }
  return file;
}

PairsFile load_pairs(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_pairs(in);
}

std::string serialize_pairs(const PairsFile& file) {
  std::string out = "pairs\n";
  if (file.center) {
    out += "center " + format_double(file.center->x) + ' ' + format_double(file.center->y) + '\n';
  }
  if (file.order) out += "order " + std::to_string(*file.order) + '\n';
  for (const auto& pair : file.pairs) {
    out += format_double(pair.fisheye.x) + ' ' + format_double(pair.fisheye.y) + ' ' +
           format_double(pair.birdeye.x) + ' ' + format_double(pair.birdeye.y) + '\n';
  }
  return out;
}

// -------------------------------------------------------------- route files

std::vector<routes::RouteDefinition> parse_routes(std::istream& in) {
  constexpr const char* kFormat = "routes";
  LineReader reader(in);
  std::string line;
  std::vector<std::string_view> tokens;
  expect_header(reader, kFormat, "routes", line, tokens);

  std::vector<routes::RouteDefinition> defs;
  while (reader.next(line)) {
    tokens = split(line);
    size_t n = reader.line_no();
    if (tokens[0] != "route" || tokens.size() != 2) {
      bad(kFormat, n, "expected 'route <id>' to open a block");
    }
    routes::RouteDefinition def;
    def.id = std::string(tokens[1]);
    long points_expected = -1;
    bool closed = false;
    while (reader.next(line)) {
      tokens = split(line);
      n = reader.line_no();
      if (tokens[0] == "degree" && tokens.size() == 2) {
        def.degree = static_cast<int>(need_int(tokens[1], kFormat, n));
      } else if (tokens[0] == "rotate" && tokens.size() == 2) {
        def.frame.rotate_deg = need_double(tokens[1], kFormat, n);
      } else if (tokens[0] == "axis" && tokens.size() == 2) {
        if (tokens[1] == "x") {
          def.frame.y_parametric = false;
        } else if (tokens[1] == "y") {
          def.frame.y_parametric = true;
        } else {
          bad(kFormat, n, "axis must be 'x' or 'y'");
        }
      } else if (tokens[0] == "points" && tokens.size() == 2) {
        points_expected = need_int(tokens[1], kFormat, n);
        for (long i = 0; i < points_expected; ++i) {
          if (!reader.next(line)) bad(kFormat, reader.line_no(), "route ends mid point list");
          tokens = split(line);
          n = reader.line_no();
          if (tokens.size() != 2) bad(kFormat, n, "control points are two numbers per line");
          def.control_points.push_back(
              {need_double(tokens[0], kFormat, n), need_double(tokens[1], kFormat, n)});
        }
      } else if (tokens[0] == "end" && tokens.size() == 1) {
        closed = true;
        break;
      } else {
        bad(kFormat, n, "unrecognized line '" + line + "' in route " + def.id);
      }
    }
    if (!closed) bad(kFormat, reader.line_no(), "route " + def.id + " is missing 'end'");
    if (points_expected < 0) bad(kFormat, reader.line_no(), "route " + def.id + " has no points");
    defs.push_back(std::move(def));
  }
  return defs;
}

std::vector<routes::RouteDefinition> load_routes(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_routes(in);
}

std::string serialize_routes(std::span<const routes::RouteDefinition> defs) {
  std::string out = "routes\n";
  for (const auto& def : defs) {
    out += "route " + def.id + '\n';
    out += "degree " + std::to_string(def.degree) + '\n';
    out += "rotate " + format_double(def.frame.rotate_deg) + '\n';
    out += std::string("axis ") + (def.frame.y_parametric ? "y" : "x") + '\n';
    out += "points " + std::to_string(def.control_points.size()) + '\n';
    for (const auto& p : def.control_points) {
      out += format_double(p.x) + ' ' + format_double(p.y) + '\n';
    }
    out += "end\n";
  }
  return out;
}

// --------------------------------------------------------- trajectory files

TrajectoryFile parse_trajectories(std::istream& in) {
  constexpr const char* kFormat = "trajectories";
  LineReader reader(in);
  std::string line;
  std::vector<std::string_view> tokens;
  expect_header(reader, kFormat, "trajectories", line, tokens);
  if (tokens.size() != 4) {
    bad(kFormat, reader.line_no(), "header takes width, height, and fps");
  }
  TrajectoryFile file;
  file.camera.width = need_double(tokens[1], kFormat, reader.line_no());
  file.camera.height = need_double(tokens[2], kFormat, reader.line_no());
  file.camera.fps = need_double(tokens[3], kFormat, reader.line_no());

  while (reader.next(line)) {
    tokens = split(line);
    size_t n = reader.line_no();
    if (tokens[0] != "trajectory" || tokens.size() != 4) {
      bad(kFormat, n, "expected 'trajectory <id> <complete|partial> <count>'");
    }
    Trajectory trajectory;
    trajectory.track_id = static_cast<int>(need_int(tokens[1], kFormat, n));
    if (tokens[2] == "complete") {
      trajectory.complete = true;
    } else if (tokens[2] == "partial") {
      trajectory.complete = false;
    } else {
      bad(kFormat, n, "trajectory status must be 'complete' or 'partial'");
    }
    long count = need_int(tokens[3], kFormat, n);
    for (long i = 0; i < count; ++i) {
      if (!reader.next(line)) bad(kFormat, reader.line_no(), "trajectory ends mid point list");
      tokens = split(line);
      n = reader.line_no();
      if (tokens.size() != 4) bad(kFormat, n, "points are frame, timestamp, x, y");
      TrajectoryPoint point;
      point.frame = need_int(tokens[0], kFormat, n);
      point.timestamp = need_double(tokens[1], kFormat, n);
      point.birdeye = {need_double(tokens[2], kFormat, n), need_double(tokens[3], kFormat, n)};
      trajectory.points.push_back(point);
    }
    if (!reader.next(line) || split(line)[0] != "end") {
      bad(kFormat, reader.line_no(), "trajectory is missing 'end'");
    }
    file.trajectories.push_back(std::move(trajectory));
  }
  return file;
}

TrajectoryFile load_trajectories(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_trajectories(in);
}

std::string serialize_trajectories(const CameraFrame& camera,
                                   std::span<const Trajectory> trajectories) {
  std::string out = "trajectories " + format_double(camera.width) + ' ' +
                    format_double(camera.height) + ' ' + format_double(camera.fps) + '\n';
  for (const auto& trajectory : trajectories) {
    out += "trajectory " + std::to_string(trajectory.track_id) + ' ' +
           (trajectory.complete ? "complete" : "partial") + ' ' +
           std::to_string(trajectory.points.size()) + '\n';
    for (const auto& point : trajectory.points) {
      out += std::to_string(point.frame) + ' ' + format_double(point.timestamp) + ' ' +
             format_double(point.birdeye.x) + ' ' + format_double(point.birdeye.y) + '\n';
    }
    out += "end\n";
  }
  return out;
}

// ------------------------------------------------------------ baseline files

std::vector<anomaly::Baseline> parse_baselines(std::istream& in) {
  constexpr const char* kFormat = "baselines";
  LineReader reader(in);
  std::string line;
  std::vector<std::string_view> tokens;
  expect_header(reader, kFormat, "baselines", line, tokens);

  std::vector<anomaly::Baseline> baselines;
  while (reader.next(line)) {
    tokens = split(line);
    size_t n = reader.line_no();
    if (tokens.size() != 10 || tokens[0] != "route" || tokens[2] != "degree" ||
        tokens[4] != "threshold" || tokens[6] != "samples" || tokens[8] != "created") {
      bad(kFormat, n, "expected 'route <id> degree <n> threshold <t> samples <c> created <ts>'");
    }
    anomaly::Baseline baseline;
    baseline.route_id = std::string(tokens[1]);
    baseline.lowest_degree = static_cast<int>(need_int(tokens[3], kFormat, n));
    baseline.error_threshold = need_double(tokens[5], kFormat, n);
    baseline.sample_count = need_int(tokens[7], kFormat, n);
    baseline.created_at = need_double(tokens[9], kFormat, n);
    baselines.push_back(std::move(baseline));
  }
  return baselines;
}

std::vector<anomaly::Baseline> load_baselines(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_baselines(in);
}

std::string serialize_baselines(std::span<const anomaly::Baseline> baselines) {
  std::string out = "baselines\n";
  for (const auto& b : baselines) {
    out += "route " + b.route_id + " degree " + std::to_string(b.lowest_degree) + " threshold " +
           format_double(b.error_threshold) + " samples " + std::to_string(b.sample_count) +
           " created " + format_double(b.created_at) + '\n';
  }
  return out;
}

// ------------------------------------------------------------- verdict files

std::vector<anomaly::Verdict> parse_verdicts(std::istream& in) {
  constexpr const char* kFormat = "verdicts";
  LineReader reader(in);
  std::string line;
  std::vector<std::string_view> tokens;
  expect_header(reader, kFormat, "verdicts", line, tokens);

  std::vector<anomaly::Verdict> verdicts;
  while (reader.next(line)) {
    tokens = split(line);
    size_t n = reader.line_no();
    if (tokens.size() < 7) {
      bad(kFormat, n, "verdict rows take at least seven fields");
    }
    anomaly::Verdict verdict;
    verdict.timestamp = need_double(tokens[0], kFormat, n);
    verdict.trajectory_id = static_cast<int>(need_int(tokens[1], kFormat, n));
    verdict.route_id = std::string(tokens[2]);
    verdict.runtime_degree = static_cast<int>(need_int(tokens[3], kFormat, n));
    verdict.baseline_degree = static_cast<int>(need_int(tokens[4], kFormat, n));
    verdict.degree_diff = static_cast<int>(need_int(tokens[5], kFormat, n));
    if (tokens[6] == "anomaly") {
      verdict.is_anomaly = true;
    } else if (tokens[6] == "normal") {
      verdict.is_anomaly = false;
    } else {
      bad(kFormat, n, "verdict status must be 'normal' or 'anomaly'");
    }
    for (size_t i = 7; i < tokens.size(); ++i) {
      verdict.merged_ids.push_back(static_cast<int>(need_int(tokens[i], kFormat, n)));
    }
    verdicts.push_back(std::move(verdict));
  }
  return verdicts;
}

std::vector<anomaly::Verdict> load_verdicts(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_verdicts(in);
}

std::string serialize_verdicts(std::span<const anomaly::Verdict> verdicts) {
  std::string out = "verdicts\n";
  for (const auto& v : verdicts) {
    out += format_double(v.timestamp) + ' ' + std::to_string(v.trajectory_id) + ' ' + v.route_id +
           ' ' + std::to_string(v.runtime_degree) + ' ' + std::to_string(v.baseline_degree) + ' ' +
           std::to_string(v.degree_diff) + ' ' + (v.is_anomaly ? "anomaly" : "normal");
    for (int id : v.merged_ids) out += ' ' + std::to_string(id);
    out += '\n';
  }
  return out;
}

// ------------------------------------------------------------ scenario files

sim::ScenarioScript parse_scenario(std::istream& in, const std::string& base_dir) {
  constexpr const char* kFormat = "scenario";
  LineReader reader(in);
  std::string line;
  std::vector<std::string_view> tokens;
  expect_header(reader, kFormat, "scenario", line, tokens);

  sim::ScenarioScript script;
  bool have_routes = false;
  while (reader.next(line)) {
    tokens = split(line);
    size_t n = reader.line_no();
    const std::string_view key = tokens[0];
    if (key == "incident") {
      script.incidents.push_back(parse_incident_tokens(tokens, kFormat, n));
      continue;
    }
    if (key == "image") {
      if (tokens.size() != 3) bad(kFormat, n, "image takes width and height");
      script.image_width = need_double(tokens[1], kFormat, n);
      script.image_height = need_double(tokens[2], kFormat, n);
      continue;
    }
    if (tokens.size() != 2) bad(kFormat, n, "expected 'key value'");
    const std::string_view value = tokens[1];
    if (key == "duration") {
      script.duration = need_double(value, kFormat, n);
    } else if (key == "seed") {
      script.seed = static_cast<std::uint64_t>(need_int(value, kFormat, n));
    } else if (key == "noise_seed") {
      script.noise_seed = static_cast<std::uint64_t>(need_int(value, kFormat, n));
    } else if (key == "routes") {
      std::filesystem::path route_path{std::string(value)};
      if (route_path.is_relative() && !base_dir.empty()) {
        route_path = std::filesystem::path(base_dir) / route_path;
      }
      script.routes = load_routes(route_path.string());
      have_routes = true;
    } else if (key == "spawn_rate") {
      script.spawn_rate = need_double(value, kFormat, n);
    } else if (key == "speed") {
      script.speed = need_double(value, kFormat, n);
    } else if (key == "speed_jitter") {
      script.noise.speed_jitter = need_double(value, kFormat, n);
    } else if (key == "lane_sigma") {
      script.noise.lane_sigma = need_double(value, kFormat, n);
    } else if (key == "lane_wide_sigma") {
      script.noise.lane_wide_sigma = need_double(value, kFormat, n);
    } else if (key == "lane_wide_prob") {
      script.noise.lane_wide_prob = need_double(value, kFormat, n);
    } else if (key == "lane_max") {
      script.noise.lane_max = need_double(value, kFormat, n);
    } else if (key == "lateral_sigma") {
      script.noise.lateral_sigma = need_double(value, kFormat, n);
    } else if (key == "dropout") {
      script.noise.dropout_prob = need_double(value, kFormat, n);
    } else if (key == "confidence_base") {
      script.noise.confidence_base = need_double(value, kFormat, n);
    } else if (key == "confidence_spread") {
      script.noise.confidence_spread = need_double(value, kFormat, n);
    } else if (key == "box_base") {
      script.box_base = need_double(value, kFormat, n);
    } else {
      bad(kFormat, n, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_routes) bad(kFormat, reader.line_no(), "script declares no routes file");
  return script;
}

sim::ScenarioScript load_scenario(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_scenario(in, std::filesystem::path(path).parent_path().string());
}

std::string serialize_scenario(const sim::ScenarioScript& script, const std::string& routes_path) {
  std::string out = "scenario\n";
  out += "duration " + format_double(script.duration) + '\n';
  out += "seed " + std::to_string(script.seed) + '\n';
  out += "noise_seed " + std::to_string(script.noise_seed) + '\n';
  out += "routes " + routes_path + '\n';
  out += "spawn_rate " + format_double(script.spawn_rate) + '\n';
  out += "speed " + format_double(script.speed) + '\n';
  out += "speed_jitter " + format_double(script.noise.speed_jitter) + '\n';
  out += "lane_sigma " + format_double(script.noise.lane_sigma) + '\n';
  out += "lane_wide_sigma " + format_double(script.noise.lane_wide_sigma) + '\n';
  out += "lane_wide_prob " + format_double(script.noise.lane_wide_prob) + '\n';
  out += "lane_max " + format_double(script.noise.lane_max) + '\n';
  out += "lateral_sigma " + format_double(script.noise.lateral_sigma) + '\n';
  out += "dropout " + format_double(script.noise.dropout_prob) + '\n';
  out += "confidence_base " + format_double(script.noise.confidence_base) + '\n';
  out += "confidence_spread " + format_double(script.noise.confidence_spread) + '\n';
  out += "box_base " + format_double(script.box_base) + '\n';
  out += "image " + format_double(script.image_width) + ' ' + format_double(script.image_height) +
         '\n';
  for (const auto& incident : script.incidents) append_incident_line(out, incident);
  return out;
}

// --------------------------------------------------------------- truth files

sim::GroundTruthLog parse_truth(std::istream& in) {
  constexpr const char* kFormat = "truth";
  LineReader reader(in);
  std::string line;
  std::vector<std::string_view> tokens;
  expect_header(reader, kFormat, "truth", line, tokens);
  if (tokens.size() != 4) bad(kFormat, reader.line_no(), "header takes width, height, and fps");

  sim::GroundTruthLog log;
  log.camera.width = need_double(tokens[1], kFormat, reader.line_no());
  log.camera.height = need_double(tokens[2], kFormat, reader.line_no());
  log.camera.fps = need_double(tokens[3], kFormat, reader.line_no());

  bool have_summary = false;
  while (reader.next(line)) {
    tokens = split(line);
    size_t n = reader.line_no();
    if (tokens[0] == "incident") {
      log.incidents.push_back(parse_incident_tokens(tokens, kFormat, n));
    } else if (tokens[0] == "vehicle") {
      if (tokens.size() != 7) {
        bad(kFormat, n, "expected 'vehicle <id> <route> <class> <spawn> <exit> <perturbed>'");
      }
      sim::VehicleInfo vehicle;
      vehicle.id = static_cast<int>(need_int(tokens[1], kFormat, n));
      vehicle.route_id = std::string(tokens[2]);
      vehicle.class_label = std::string(tokens[3]);
      vehicle.spawn_frame = need_int(tokens[4], kFormat, n);
      vehicle.exit_frame = need_int(tokens[5], kFormat, n);
      vehicle.perturbed = need_int(tokens[6], kFormat, n) != 0;
      log.vehicles.push_back(std::move(vehicle));
    } else if (tokens[0] == "summary") {
      if (tokens.size() != 4) bad(kFormat, n, "summary takes spawned, exited, active_at_end");
      log.spawned = need_int(tokens[1], kFormat, n);
      log.exited = need_int(tokens[2], kFormat, n);
      log.active_at_end = need_int(tokens[3], kFormat, n);
      have_summary = true;
    } else if (tokens.size() == 9) {
      sim::GroundTruthEntry entry;
      entry.frame = need_int(tokens[0], kFormat, n);
      entry.vehicle_id = static_cast<int>(need_int(tokens[1], kFormat, n));
      entry.route_id = std::string(tokens[2]);
      entry.birdeye = {need_double(tokens[3], kFormat, n), need_double(tokens[4], kFormat, n)};
      entry.box = {need_double(tokens[5], kFormat, n), need_double(tokens[6], kFormat, n),
                   need_double(tokens[7], kFormat, n), need_double(tokens[8], kFormat, n)};
      log.entries.push_back(std::move(entry));
    } else {
      bad(kFormat, n, "unrecognized line '" + line + "'");
    }
  }
  if (!have_summary) bad(kFormat, reader.line_no(), "missing summary line");
  return log;
}

sim::GroundTruthLog load_truth(const std::string& path) {
  std::ifstream in = open_input(path);
  return parse_truth(in);
}

std::string serialize_truth(const sim::GroundTruthLog& log) {
  std::string out = "truth " + format_double(log.camera.width) + ' ' +
                    format_double(log.camera.height) + ' ' + format_double(log.camera.fps) + '\n';
  for (const auto& incident : log.incidents) append_incident_line(out, incident);
  for (const auto& v : log.vehicles) {
    out += "vehicle " + std::to_string(v.id) + ' ' + v.route_id + ' ' + v.class_label + ' ' +
           std::to_string(v.spawn_frame) + ' ' + std::to_string(v.exit_frame) + ' ' +
           (v.perturbed ? "1" : "0") + '\n';
  }
  for (const auto& e : log.entries) {
    out += std::to_string(e.frame) + ' ' + std::to_string(e.vehicle_id) + ' ' + e.route_id + ' ' +
           format_double(e.birdeye.x) + ' ' + format_double(e.birdeye.y) + ' ' +
           format_double(e.box.x_min) + ' ' + format_double(e.box.y_min) + ' ' +
           format_double(e.box.x_max) + ' ' + format_double(e.box.y_max) + '\n';
  }
  out += "summary " + std::to_string(log.spawned) + ' ' + std::to_string(log.exited) + ' ' +
         std::to_string(log.active_at_end) + '\n';
  return out;
}

}  // namespace trajan::io
