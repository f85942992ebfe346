// Command-line driver: pcs {ik | shape-reg | tip-track | check} --config FILE

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pcs/checks.hpp"
#include "pcs/errors.hpp"
#include "pcs/io.hpp"
#include "pcs/sim.hpp"

namespace fs = std::filesystem;
using namespace pcs;

namespace {

std::string prepare_output(const OutputSettings& out) {
  std::error_code ec;
  fs::create_directories(out.directory, ec);
  if (ec) {
    throw Error(ErrorCode::Io,
                "cannot create output directory '" + out.directory + "': " + ec.message());
  }
  return out.directory;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

int cmd_ik(const ExperimentConfig& cfg) {
  const IkReport report =
      run_ik_experiment(cfg.rod, cfg.ik_experiment, cfg.ik, cfg.sim.samples_per_section);

  bool converged = true;
  double worst = 0.0;
  std::string energies, iterations;
  std::vector<LabeledShape> shapes;
  for (std::size_t i = 0; i < report.solutions.size(); ++i) {
    const auto& sol = report.solutions[i];
    converged = converged && sol.result.converged;
    worst = std::max(worst, sol.result.final_error);
    energies += (i ? "," : "") + fmt("%.6g", sol.energy);
    iterations += (i ? "," : "") + std::to_string(sol.result.iterations);
    shapes.push_back({"guess " + std::to_string(i + 1), sol.shape});
  }

  const std::string dir = prepare_output(cfg.output);
  if (cfg.output.csv) {
    for (std::size_t i = 0; i < report.solutions.size(); ++i) {
      write_shape_csv(report.solutions[i].shape,
                      join(dir, "ik_shape_" + std::to_string(i + 1) + ".csv"));
    }
  }
  if (cfg.output.svg) write_text_file(join(dir, "ik_shapes.svg"), render_svg(shape_plot(shapes)));

  std::cout << "ik: converged=" << (converged ? "yes" : "no") << " energies_J=" << energies
            << " iterations=" << iterations << " final_error=" << fmt("%.3g", worst)
            << " max_shape_distance_m=" << fmt("%.4g", report.max_shape_distance) << '\n';
  if (!converged) throw Error(ErrorCode::NotConverged, "IK did not converge for every guess");
  return 0;
}

int cmd_shape_reg(const ExperimentConfig& cfg) {
  const StaticsWorkspace ws(cfg.rod, cfg.quadrature_nodes);
  const ShapeRegResult res = run_shape_regulation(ws, cfg.sim, cfg.shape_regulation);
  const Trace& tr = res.trace;

  // error ratio at the recorded sample nearest 2.5 s
  std::size_t at = 0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    if (std::abs(tr.times[k] - 2.5) < std::abs(tr.times[at] - 2.5)) at = k;
  }
  const double e0 = tr.errors.front();
  const double ratio = e0 > 0.0 ? tr.errors[at] / e0 : 0.0;

  const std::string dir = prepare_output(cfg.output);
  if (cfg.output.csv) {
    write_trace_csv(tr, join(dir, "shape_reg_trace.csv"));
    for (const auto& [t, shape] : res.snapshots) {
      write_shape_csv(shape, join(dir, "shape_reg_shape_t" + fmt("%g", t) + ".csv"));
    }
  }
  if (cfg.output.svg) {
    std::vector<LabeledShape> shapes;
    for (const auto& [t, shape] : res.snapshots) shapes.push_back({"t = " + fmt("%g", t) + " s", shape});
    write_text_file(join(dir, "shape_reg_shapes.svg"), render_svg(shape_plot(shapes)));
    write_svg_plot(tr, PlotKind::wrench_vs_time, join(dir, "shape_reg_wrench.svg"));
    write_svg_plot(tr, PlotKind::error_vs_time, join(dir, "shape_reg_error.svg"));
  }

  const bool converged = tr.errors.back() <= 0.01 * e0;
  std::cout << "shape-reg: converged=" << (converged ? "yes" : "no")
            << " error_ratio_at_" << fmt("%g", tr.times[at]) << "s=" << fmt("%.4g", ratio)
            << " final_error=" << fmt("%.3g", tr.errors.back())
            << " energy_J=" << fmt("%.6g", tr.energies.back()) << '\n';
  return 0;
}

int cmd_tip_track(const ExperimentConfig& cfg, ControllerKind mode) {
  const StaticsWorkspace ws(cfg.rod, cfg.quadrature_nodes);
  TrackingSettings settings;
  settings.trajectory = cfg.trajectory;
  settings.strain_gain = cfg.strain_gain;
  settings.task_gain = cfg.task_gain;
  settings.ik = cfg.ik;
  const TrackingResult res = run_tip_tracking(ws, cfg.sim, settings, mode);
  const Trace& tr = res.trace;

  double after = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    if (tr.times[k] > 3.0) after = std::max(after, tr.errors[k]);
  }

  const std::string dir = prepare_output(cfg.output);
  const std::string stem = "tip_track_" + to_string(mode);
  if (cfg.output.csv) write_trace_csv(tr, join(dir, stem + ".csv"));
  if (cfg.output.svg) {
    write_text_file(join(dir, stem + "_path.svg"), render_svg(tip_path_plot(tr, res.desired)));
    write_svg_plot(tr, PlotKind::wrench_vs_time, join(dir, stem + "_wrench.svg"));
    write_svg_plot(tr, PlotKind::error_vs_time, join(dir, stem + "_error.svg"));
  }

  std::cout << "tip-track: mode=" << to_string(mode)
            << " converged=" << (after < 1e-3 ? "yes" : "no")
            << " max_error_after_3s_m=" << fmt("%.3g", after)
            << " final_error_m=" << fmt("%.3g", tr.errors.back())
            << " energy_J=" << fmt("%.6g", tr.energies.back());
  if (mode == ControllerKind::task) {
    std::cout << " max_pinv_residual=" << fmt("%.3g", res.max_pinv_residual);
  } else {
    std::cout << " ik_iterations_cold=" << res.cold_ik_iterations
              << " ik_iterations_warm_max=" << res.max_warm_ik_iterations;
  }
  std::cout << '\n';
  return 0;
}

int cmd_check(const ExperimentConfig& cfg) {
  const auto results = run_invariant_checks(cfg.rod, cfg.quadrature_nodes);
  int passed = 0;
  for (const auto& r : results) {
    passed += r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << fmt("%.3g", r.measured)
              << " <= " << fmt("%.0e", r.tolerance) << ")\n";
  }
  const bool ok = passed == static_cast<int>(results.size());
  std::cout << "check: " << passed << "/" << results.size() << " passed\n";
  if (!ok) throw Error(ErrorCode::NotConverged, "invariant checks failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-static Cosserat rod (piecewise constant strain) experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mode_name;
  auto* ik = app.add_subcommand("ik", "inverse kinematics from several initial guesses");
  auto* shape = app.add_subcommand("shape-reg", "strain-space shape regulation");
  auto* track = app.add_subcommand("tip-track", "tip tracking of a circular path");
  auto* check = app.add_subcommand("check", "numerical self-checks on the configured rod");
  for (auto* sub : {ik, shape, track, check}) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
  }
  track->add_option("--mode", mode_name, "controller: strain or task")
      ->check(CLI::IsMember({"strain", "task"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR:usage: " << e.what() << '\n';
    return 1;
  }

  try {
    const ExperimentConfig cfg = load_config(config_path);
    if (ik->parsed()) return cmd_ik(cfg);
    if (shape->parsed()) return cmd_shape_reg(cfg);
    if (track->parsed()) {
      const ControllerKind mode =
          mode_name.empty() ? cfg.sim.controller : controller_from_string(mode_name);
      return cmd_tip_track(cfg, mode);
    }
    return cmd_check(cfg);
  } catch (const Error& e) {
    std::cerr << "ERROR:" << error_tag(e.code()) << ": " << e.what() << '\n';
    return (is_numerical(e.code()) || e.code() == ErrorCode::Io) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "ERROR:internal: " << e.what() << '\n';
    return 2;
  }
}
