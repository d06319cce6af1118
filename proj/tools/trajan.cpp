// trajan: command-line front end for the junction trajectory pipeline.
//
// Subcommands cover the full workflow: calibrate a lens from landmark
// pairs, simulate junction traffic, track detection streams into bird's-eye
// trajectories, learn per-route baselines, run incident detection, render
// overviews, and score detector reports.
//
// Exit codes: 0 success, 2 configuration/usage errors, 3 data errors.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trajan/config.hpp"
#include "trajan/errors.hpp"
#include "trajan/geometry.hpp"
#include "trajan/io.hpp"
#include "trajan/numeric.hpp"
#include "trajan/pipeline.hpp"
#include "trajan/render.hpp"
#include "trajan/rng.hpp"
#include "trajan/routes.hpp"
#include "trajan/sim.hpp"

namespace {

using trajan::numeric::format_double;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) trajan::raise(trajan::ErrorCode::IoError, "cannot open " + path);
  return in;
}

trajan::config::PipelineConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return {};
  return trajan::config::load_config(path);
}

std::vector<trajan::routes::RouteModel> fit_models(const std::string& routes_path) {
  auto defs = trajan::io::load_routes(routes_path);
  std::vector<trajan::routes::RouteModel> models;
  models.reserve(defs.size());
  for (const auto& def : defs) models.push_back(trajan::routes::fit_route(def));
  return models;
}

/// "runs/base.detections" -> {"runs/base", ".detections"}; a missing
/// extension defaults to ".detections" so derived names stay tidy.
std::pair<std::string, std::string> split_out(const std::string& out) {
  std::filesystem::path p(out);
  std::string ext = p.extension().string();
  if (ext.empty()) ext = ".detections";
  return {(p.parent_path() / p.stem()).string(), ext};
}

std::string truth_path_for(const std::string& detections_path) {
  return std::filesystem::path(detections_path).replace_extension(".truth").string();
}

void write_scenario_output(const trajan::sim::ScenarioOutput& output,
                           const std::string& detections_path, const std::string& truth_path) {
  std::ostringstream detections;
  trajan::ingest::serialize_stream(detections, output.detections);
  trajan::io::write_file(detections_path, detections.str());
  trajan::io::write_file(truth_path, trajan::io::serialize_truth(output.truth));
  std::cout << "wrote " << detections_path << " frames " << output.detections.frames.size()
            << " vehicles " << output.truth.spawned << " exited " << output.truth.exited
            << " active " << output.truth.active_at_end << '\n';
}

struct SimulateOptions {
  std::string script;
  std::string lens;
  std::string out;
  std::string truth;
  bool suite = false;
  int batch = 0;
  std::uint64_t seed = 0;
  std::uint64_t noise_seed = 0;
  bool seed_set = false;
  bool noise_seed_set = false;
};

void run_simulate(const SimulateOptions& opt) {
  auto lens = trajan::io::load_lens(opt.lens).model;
  auto script = trajan::io::load_scenario(opt.script);
  if (opt.seed_set) script.seed = opt.seed;
  if (opt.noise_seed_set) script.noise_seed = opt.noise_seed;
  if (opt.suite && opt.batch > 0) {
    trajan::raise(trajan::ErrorCode::ConfigError, "--suite and --batch are mutually exclusive");
  }

  if (opt.suite) {
    auto [stem, ext] = split_out(opt.out);
    auto scripts = trajan::sim::seven_scenario_suite(script);
    for (size_t i = 0; i < scripts.size(); ++i) {
      std::string base = stem + "-s" + std::to_string(i + 1);
      auto output = trajan::sim::run_scenario(scripts[i], lens);
      write_scenario_output(output, base + ext, base + ".truth");
    }
    return;
  }
  if (opt.batch > 0) {
    auto [stem, ext] = split_out(opt.out);
    for (int i = 0; i < opt.batch; ++i) {
      char tag[16];
      std::snprintf(tag, sizeof tag, "-r%02d", i);
      std::string base = stem + tag;
      auto output = trajan::sim::run_scenario(trajan::sim::batch_variant(script, i), lens);
      write_scenario_output(output, base + ext, base + ".truth");
    }
    return;
  }
  auto output = trajan::sim::run_scenario(script, lens);
  write_scenario_output(output, opt.out,
                        opt.truth.empty() ? truth_path_for(opt.out) : opt.truth);
}

struct CalibrateOptions {
  std::string pairs;
  std::string out;
  int order = -1;
  std::vector<double> center;
};

void run_calibrate(const CalibrateOptions& opt) {
  auto file = trajan::io::load_pairs(opt.pairs);
  int order = opt.order >= 0 ? opt.order : file.order.value_or(3);
  trajan::Point2 center;
  if (opt.center.size() == 2) {
    center = {opt.center[0], opt.center[1]};
  } else if (file.center) {
    center = *file.center;
  } else {
    trajan::raise(trajan::ErrorCode::ConfigError,
                  "no distortion center: pass --center or add a center line to the pairs file");
  }
  auto fit = trajan::geometry::fit_distortion(file.pairs, center, order);
  trajan::io::write_file(opt.out, trajan::io::serialize_lens(fit.model, fit.residual_rms));
  std::cout << "calibrated order " << fit.model.order() << " valid_radius "
            << format_double(fit.model.valid_radius()) << " residual_rms "
            << format_double(fit.residual_rms) << '\n';
}

struct TrackOptions {
  std::string detections;
  std::string lens;
  std::string config;
  std::string out;
};

void run_track(const TrackOptions& opt) {
  auto lens = trajan::io::load_lens(opt.lens).model;
  auto cfg = load_config_or_default(opt.config);
  std::ifstream in = open_input(opt.detections);
  auto result = trajan::pipeline::run_tracking(in, lens, cfg);
  long complete = 0;
  for (const auto& t : result.trajectories) complete += t.complete ? 1 : 0;
  trajan::io::write_file(opt.out,
                         trajan::io::serialize_trajectories(result.camera, result.trajectories));
  std::cout << "tracked " << result.trajectories.size() << " trajectories (" << complete
            << " complete, " << result.trajectories.size() - complete << " partial) over "
            << result.frames << " frames\n";
}

struct BaselineOptions {
  std::string trajectories;
  std::string routes;
  std::string config;
  std::string out;
};

void run_baseline(const BaselineOptions& opt) {
  auto cfg = load_config_or_default(opt.config);
  auto models = fit_models(opt.routes);
  auto file = trajan::io::load_trajectories(opt.trajectories);
  auto outcome = trajan::pipeline::build_baselines(file.camera, file.trajectories, models, cfg);
  trajan::io::write_file(opt.out, trajan::io::serialize_baselines(outcome.report.baselines));
  for (const auto& b : outcome.report.baselines) {
    std::cout << "route " << b.route_id << " degree " << b.lowest_degree << " samples "
              << b.sample_count << '\n';
  }
  for (const auto& group : outcome.report.insufficient) {
    std::cout << "insufficient " << group.route_id << " samples " << group.sample_count << '\n';
  }
  std::cout << "classified " << outcome.classified.size() << " unclassified "
            << outcome.unclassified << " partial " << outcome.skipped_partial << '\n';
}

struct DetectOptions {
  std::string detections;
  std::string lens;
  std::string routes;
  std::string baseline;
  std::string config;
  std::string out;
  std::string trajectories_out;
  std::string svg_out;
};

void run_detect_cmd(const DetectOptions& opt) {
  auto lens = trajan::io::load_lens(opt.lens).model;
  auto cfg = load_config_or_default(opt.config);
  auto models = fit_models(opt.routes);
  auto baselines = trajan::io::load_baselines(opt.baseline);
  std::ifstream in = open_input(opt.detections);
  auto outcome = trajan::pipeline::run_detect(in, lens, models, baselines, cfg);
  trajan::io::write_file(opt.out, trajan::io::serialize_verdicts(outcome.verdicts));
  if (!opt.trajectories_out.empty()) {
    trajan::io::write_file(opt.trajectories_out,
                           trajan::io::serialize_trajectories(outcome.tracking.camera,
                                                              outcome.tracking.trajectories));
  }
  if (!opt.svg_out.empty()) {
    trajan::io::write_file(
        opt.svg_out, trajan::render::render_svg(outcome.tracking.camera, models,
                                                outcome.tracking.trajectories, outcome.verdicts));
  }
  long anomalies = 0;
  for (const auto& v : outcome.verdicts) anomalies += v.is_anomaly ? 1 : 0;
  std::cout << "checked " << outcome.verdicts.size() << " trajectories: " << anomalies
            << " anomalies, " << outcome.unclassified << " unclassified, "
            << outcome.skipped_partial << " partial\n";
}

struct RenderOptions {
  std::string trajectories;
  std::string routes;
  std::string verdicts;
  std::string out;
};

void run_render(const RenderOptions& opt) {
  auto models = fit_models(opt.routes);
  auto file = trajan::io::load_trajectories(opt.trajectories);
  std::vector<trajan::anomaly::Verdict> verdicts;
  if (!opt.verdicts.empty()) verdicts = trajan::io::load_verdicts(opt.verdicts);
  trajan::io::write_file(
      opt.out, trajan::render::render_svg(file.camera, models, file.trajectories, verdicts));
  std::cout << "rendered " << file.trajectories.size() << " trajectories over " << models.size()
            << " routes\n";
}

struct ScoreOptions {
  std::string reports;
  std::string out;
};

void run_score(const ScoreOptions& opt) {
  std::ifstream in = open_input(opt.reports);
  auto reports = trajan::ingest::parse_detector_reports(in);
  if (reports.empty()) {
    trajan::raise(trajan::ErrorCode::MalformedRecord, "no detector reports in " + opt.reports);
  }
  std::vector<std::pair<double, std::string>> scored;
  scored.reserve(reports.size());
  for (const auto& r : reports) scored.push_back({trajan::ingest::detector_score(r), r.name});
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::string text;
  for (const auto& [score, name] : scored) {
    text += name + ' ' + format_double(score) + '\n';
  }
  text += "best " + scored.front().second + '\n';
  std::cout << text;
  if (!opt.out.empty()) trajan::io::write_file(opt.out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"junction trajectory pipeline: calibration, simulation, tracking, routes, "
               "and polynomial-degree anomaly detection"};
  app.require_subcommand(1);

  SimulateOptions sim_opt;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a traffic scenario into detection files");
  sim_cmd->add_option("--script", sim_opt.script, "Scenario script file")->required();
  sim_cmd->add_option("--lens", sim_opt.lens, "Fitted lens file")->required();
  sim_cmd->add_option("--out", sim_opt.out, "Output detections file (suite/batch: name prefix)")
      ->required();
  sim_cmd->add_option("--truth", sim_opt.truth, "Output ground-truth file (default: <out>.truth)");
  sim_cmd->add_flag("--suite", sim_opt.suite,
                    "Emit the seven-scenario evaluation suite (six incidents plus one calm)");
  sim_cmd->add_option("--batch", sim_opt.batch,
                      "Emit N no-incident runs with per-run derived noise seeds");
  sim_cmd->add_option("--seed", sim_opt.seed, "Override the structural seed");
  sim_cmd->add_option("--noise-seed", sim_opt.noise_seed, "Override the noise seed");

  CalibrateOptions cal_opt;
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit the distortion model from landmark pairs");
  cal_cmd->add_option("--pairs", cal_opt.pairs, "Correspondence pairs file")->required();
  cal_cmd->add_option("--out", cal_opt.out, "Output lens file")->required();
  cal_cmd->add_option("--order", cal_opt.order, "Polynomial order (default: file's, else 3)");
  cal_cmd->add_option("--center", cal_opt.center, "Distortion center x y")->expected(2);

  TrackOptions trk_opt;
  auto* trk_cmd = app.add_subcommand("track", "Turn a detection stream into trajectories");
  trk_cmd->add_option("--detections", trk_opt.detections, "Detection stream file")->required();
  trk_cmd->add_option("--lens", trk_opt.lens, "Fitted lens file")->required();
  trk_cmd->add_option("--config", trk_opt.config, "Pipeline config file");
  trk_cmd->add_option("--out", trk_opt.out, "Output trajectories file")->required();

  BaselineOptions bas_opt;
  auto* bas_cmd = app.add_subcommand("baseline", "Learn per-route baseline degrees");
  bas_cmd->add_option("--trajectories", bas_opt.trajectories, "Setup trajectories file")
      ->required();
  bas_cmd->add_option("--routes", bas_opt.routes, "Route definitions file")->required();
  bas_cmd->add_option("--config", bas_opt.config, "Pipeline config file");
  bas_cmd->add_option("--out", bas_opt.out, "Output baselines file")->required();

  DetectOptions det_opt;
  auto* det_cmd = app.add_subcommand("detect", "Track, classify, and flag anomalies");
  det_cmd->add_option("--detections", det_opt.detections, "Detection stream file")->required();
  det_cmd->add_option("--lens", det_opt.lens, "Fitted lens file")->required();
  det_cmd->add_option("--routes", det_opt.routes, "Route definitions file")->required();
  det_cmd->add_option("--baseline", det_opt.baseline, "Learned baselines file")->required();
  det_cmd->add_option("--config", det_opt.config, "Pipeline config file");
  det_cmd->add_option("--out", det_opt.out, "Output verdicts file")->required();
  det_cmd->add_option("--trajectories", det_opt.trajectories_out,
                      "Also write the tracked trajectories here");
  det_cmd->add_option("--svg", det_opt.svg_out, "Also render an SVG overview here");

  RenderOptions ren_opt;
  auto* ren_cmd = app.add_subcommand("render", "Render routes and trajectories to SVG");
  ren_cmd->add_option("--trajectories", ren_opt.trajectories, "Trajectories file")->required();
  ren_cmd->add_option("--routes", ren_opt.routes, "Route definitions file")->required();
  ren_cmd->add_option("--verdicts", ren_opt.verdicts, "Verdicts file (anomalies in orange)");
  ren_cmd->add_option("--out", ren_opt.out, "Output SVG file")->required();

  ScoreOptions sco_opt;
  auto* sco_cmd = app.add_subcommand("score-detector", "Rank detector evaluation reports");
  sco_cmd->add_option("--reports", sco_opt.reports, "Detector reports file")->required();
  sco_cmd->add_option("--out", sco_opt.out, "Also write the ranking here");

  try {
    app.parse(argc, argv);
    sim_opt.seed_set = sim_cmd->count("--seed") > 0;
    sim_opt.noise_seed_set = sim_cmd->count("--noise-seed") > 0;
    if (*sim_cmd) run_simulate(sim_opt);
    if (*cal_cmd) run_calibrate(cal_opt);
    if (*trk_cmd) run_track(trk_opt);
    if (*bas_cmd) run_baseline(bas_opt);
    if (*det_cmd) run_detect_cmd(det_opt);
    if (*ren_cmd) run_render(ren_opt);
    if (*sco_cmd) run_score(sco_opt);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const trajan::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return trajan::is_config_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
