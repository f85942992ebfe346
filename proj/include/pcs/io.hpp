#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcs/control.hpp"
#include "pcs/ik.hpp"
#include "pcs/sim.hpp"

namespace pcs {

// ---------------------------------------------------------------- config

struct OutputSettings {
  std::string directory = "out";
  bool csv = true;
  bool svg = true;
};

/// Everything a CLI run needs. Sections missing from the JSON keep the
/// defaults of the experiments.
struct ExperimentConfig {
  RodSpec rod;
  int quadrature_nodes = 5;
  SimConfig sim;
  IkSettings ik;
  double strain_gain = 2.0;
  double task_gain = 2.0;
  CircleTrajectory trajectory;
  IkExperiment ik_experiment = IkExperiment::two_section_default();
  ShapeRegulation shape_regulation = ShapeRegulation::two_section_default();
  OutputSettings output;

  // Cross-field checks; throws InvalidArgument.
  void validate() const;
};

/// Parses JSON text. Syntax errors, wrong types and unknown keys raise
/// Error(Config) naming the key path; out-of-range values raise
/// InvalidArgument through validate().
ExperimentConfig parse_config(const std::string& json_text);

// Missing or unreadable file raises Error(Config).
ExperimentConfig load_config(const std::string& path);

// ---------------------------------------------------------------- csv

// %.17g, enough to read every double back exactly.
std::string format_double(double v);

/// Column order: t, q1..q6n, x, y, z, r1, r2, r3, F1..Fm, error, energy.
std::string trace_csv(const Trace& trace);
/// Column order: X, x, y, z, R11, R12, R13, R21, ..., R33.
std::string shape_csv(const std::vector<ShapeSample>& shape);

// Writes text to path; Error(Io) on failure.
void write_text_file(const std::string& path, const std::string& text);
void write_trace_csv(const Trace& trace, const std::string& path);
void write_shape_csv(const std::vector<ShapeSample>& shape, const std::string& path);

// ---------------------------------------------------------------- svg

enum class PlotKind { shape_xy, tip_path, wrench_vs_time, error_vs_time };

std::string to_string(PlotKind kind);
PlotKind plot_kind_from_string(const std::string& name);

struct PlotSeries {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
  bool dashed = false;
};

struct PlotData {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;
  bool equal_aspect = false;
  std::vector<PlotSeries> series;
};

// Self-contained SVG with axes, ticks, labels and a legend.
std::string render_svg(const PlotData& plot);

struct LabeledShape {
  std::string label;
  std::vector<ShapeSample> shape;
};

PlotData shape_plot(const std::vector<LabeledShape>& shapes);
// Tip path projected on the y-z plane, with an optional reference path.
PlotData tip_path_plot(const Trace& trace, const std::vector<Vector3d>& reference = {});
PlotData wrench_plot(const Trace& trace);
PlotData error_plot(const Trace& trace);

/// Trace-based kinds only; shape_xy needs shapes and goes through shape_plot.
void write_svg_plot(const Trace& trace, PlotKind kind, const std::string& path);

}  // namespace pcs
