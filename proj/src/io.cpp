#include "pcs/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "pcs/errors.hpp"

namespace pcs {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

// A JSON object together with its dotted path, for error messages.
class Node {
 public:
  Node(const json& j, std::string path, std::initializer_list<const char*> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) config_error(where() + " must be an object");
    for (const auto& item : j_.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* k) { return item.key() == k; });
      if (!known) config_error("unknown key '" + child(item.key()) + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const { return j_.at(key); }
  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void read(const char* key, double& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) config_error(child(key) + " must be a number");
    out = v.get<double>();
  }

  void read(const char* key, int& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) config_error(child(key) + " must be an integer");
    const auto wide = v.get<long long>();
    if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max()) {
      config_error(child(key) + " is out of integer range");
    }
    out = static_cast<int>(wide);
  }

  void read(const char* key, bool& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) config_error(child(key) + " must be true or false");
    out = v.get<bool>();
  }

  void read(const char* key, std::string& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_string()) config_error(child(key) + " must be a string");
    out = v.get<std::string>();
  }

  void read(const char* key, std::vector<double>& out) const {
    if (!has(key)) return;
    out = numbers(j_.at(key), child(key));
  }

  void read(const char* key, VectorXd& out) const {
    if (!has(key)) return;
    const auto v = numbers(j_.at(key), child(key));
    out = Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

  static std::vector<double> numbers(const json& v, const std::string& path) {
    if (!v.is_array()) config_error(path + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) config_error(path + " must be an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

 private:
  std::string where() const { return path_.empty() ? "config root" : path_; }

  const json& j_;
  std::string path_;
};

Matrix3d read_matrix3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) config_error(path + " must be a 3x3 array of rows");
  Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    const auto row = Node::numbers(v[i], path);
    if (row.size() != 3) config_error(path + " must be a 3x3 array of rows");
    for (int j = 0; j < 3; ++j) m(i, j) = row[j];
  }
  return m;
}

Vector3d read_vector3(const json& v, const std::string& path) {
  const auto x = Node::numbers(v, path);
  if (x.size() != 3) config_error(path + " must have 3 entries");
  return {x[0], x[1], x[2]};
}

void read_rod(const Node& node, RodSpec& rod) {
  node.read("length", rod.length);
  node.read("num_sections", rod.num_sections);
  node.read("section_lengths", rod.section_lengths);
  node.read("radius", rod.radius);
  node.read("youngs_modulus", rod.youngs_modulus);
  node.read("poisson_ratio", rod.poisson_ratio);
  node.read("density", rod.density);
  node.read("shear_viscosity", rod.shear_viscosity);
  if (node.has("gravity")) {
    const auto g = Node::numbers(node.raw("gravity"), node.child("gravity"));
    if (g.size() != 6) config_error(node.child("gravity") + " must have 6 entries");
    for (int i = 0; i < 6; ++i) rod.gravity(i) = g[i];
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  rod.validate();
  if (quadrature_nodes < 1) {
    throw Error(ErrorCode::InvalidArgument, "statics.quadrature_nodes must be >= 1");
  }
  sim.validate();
  ik.validate();
  if (!(strain_gain > 0.0)) throw Error(ErrorCode::InvalidArgument, "gains.strain must be > 0");
  if (!(task_gain > 0.0)) throw Error(ErrorCode::InvalidArgument, "gains.task must be > 0");
  trajectory.validate();
  if (output.directory.empty()) {
    throw Error(ErrorCode::InvalidArgument, "output.directory must not be empty");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  const Node top(root, "",
                 {"rod", "statics", "sim", "ik", "gains", "trajectory", "ik_experiment",
                  "shape_regulation", "output"});

  if (top.has("rod")) {
    read_rod(Node(top.raw("rod"), "rod",
                  {"length", "num_sections", "section_lengths", "radius", "youngs_modulus",
                   "poisson_ratio", "density", "shear_viscosity", "gravity"}),
             cfg.rod);
  }
  if (top.has("statics")) {
    const Node node(top.raw("statics"), "statics", {"quadrature_nodes"});
    node.read("quadrature_nodes", cfg.quadrature_nodes);
  }
  if (top.has("sim")) {
    const Node node(top.raw("sim"), "sim",
                    {"dt", "duration", "controller", "record_every", "samples_per_section"});
    node.read("dt", cfg.sim.dt);
    node.read("duration", cfg.sim.duration);
    node.read("record_every", cfg.sim.record_every);
    node.read("samples_per_section", cfg.sim.samples_per_section);
    if (node.has("controller")) {
      std::string name;
      node.read("controller", name);
      try {
        cfg.sim.controller = controller_from_string(name);
      } catch (const Error&) {
        config_error("sim.controller must be \"strain\" or \"task\"");
      }
    }
  }
  if (top.has("ik")) {
    const Node node(top.raw("ik"), "ik",
                    {"tolerance", "max_iterations", "step_scale", "pinv_cutoff",
                     "max_backtracks"});
    node.read("tolerance", cfg.ik.tolerance);
    node.read("max_iterations", cfg.ik.max_iterations);
    node.read("step_scale", cfg.ik.step_scale);
    node.read("pinv_cutoff", cfg.ik.pinv_cutoff);
    node.read("max_backtracks", cfg.ik.max_backtracks);
  }
  if (top.has("gains")) {
    const Node node(top.raw("gains"), "gains", {"strain", "task"});
    node.read("strain", cfg.strain_gain);
    node.read("task", cfg.task_gain);
  }
  if (top.has("trajectory")) {
    const Node node(top.raw("trajectory"), "trajectory",
                    {"center_x", "radius", "period", "rotation"});
    node.read("center_x", cfg.trajectory.center_x);
    node.read("radius", cfg.trajectory.radius);
    node.read("period", cfg.trajectory.period);
    if (node.has("rotation")) {
      cfg.trajectory.rotation = read_matrix3(node.raw("rotation"), "trajectory.rotation");
    }
  }
  if (top.has("ik_experiment")) {
    const Node node(top.raw("ik_experiment"), "ik_experiment",
                    {"target_rotation", "target_position", "initial_guesses"});
    Matrix3d R = cfg.ik_experiment.target.rotation();
    Vector3d p = cfg.ik_experiment.target.position();
    if (node.has("target_rotation")) {
      R = read_matrix3(node.raw("target_rotation"), "ik_experiment.target_rotation");
    }
    if (node.has("target_position")) {
      p = read_vector3(node.raw("target_position"), "ik_experiment.target_position");
    }
    try {
      cfg.ik_experiment.target = Pose(R, p);
    } catch (const Error& e) {
      config_error(std::string("ik_experiment.target_rotation: ") + e.what());
    }
    if (node.has("initial_guesses")) {
      const json& guesses = node.raw("initial_guesses");
      if (!guesses.is_array()) config_error("ik_experiment.initial_guesses must be an array");
      cfg.ik_experiment.initial_guesses.clear();
      for (const auto& g : guesses) {
        const auto v = Node::numbers(g, "ik_experiment.initial_guesses");
        cfg.ik_experiment.initial_guesses.push_back(
            Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
      }
    }
  }
  if (top.has("shape_regulation")) {
    const Node node(top.raw("shape_regulation"), "shape_regulation",
                    {"q_desired", "snapshot_times"});
    node.read("q_desired", cfg.shape_regulation.q_desired);
    node.read("snapshot_times", cfg.shape_regulation.snapshot_times);
  }
  if (top.has("output")) {
    const Node node(top.raw("output"), "output", {"directory", "csv", "svg"});
    node.read("directory", cfg.output.directory);
    node.read("csv", cfg.output.csv);
    node.read("svg", cfg.output.svg);
  }

  cfg.shape_regulation.gain = cfg.strain_gain;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

// ---------------------------------------------------------------- csv

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_csv(const Trace& trace) {
  const Eigen::Index nq = trace.empty() ? 0 : trace.strains.front().size();
  const Eigen::Index nf = trace.empty() ? 0 : trace.wrenches.front().size();
  std::string out = "t";
  for (Eigen::Index i = 1; i <= nq; ++i) out += ",q" + std::to_string(i);
  out += ",x,y,z,r1,r2,r3";
  for (Eigen::Index i = 1; i <= nf; ++i) out += ",F" + std::to_string(i);
  out += ",error,energy\n";

  auto put = [&out](double v) {
    out += ',';
    out += format_double(v);
  };
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out += format_double(trace.times[k]);
    for (double v : trace.strains[k]) put(v);
    for (double v : trace.tip_poses[k].position()) put(v);
    for (double v : trace.tip_r[k]) put(v);
    for (double v : trace.wrenches[k]) put(v);
    put(trace.errors[k]);
    put(trace.energies[k]);
    out += '\n';
  }
  return out;
}

std::string shape_csv(const std::vector<ShapeSample>& shape) {
  std::string out = "X,x,y,z,R11,R12,R13,R21,R22,R23,R31,R32,R33\n";
  for (const auto& s : shape) {
    out += format_double(s.X);
    for (double v : s.pose.position()) {
      out += ',';
      out += format_double(v);
    }
    const Matrix3d& R = s.pose.rotation();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        out += ',';
        out += format_double(R(i, j));
      }
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

void write_trace_csv(const Trace& trace, const std::string& path) {
  write_text_file(path, trace_csv(trace));
}

void write_shape_csv(const std::vector<ShapeSample>& shape, const std::string& path) {
  write_text_file(path, shape_csv(shape));
}

// ---------------------------------------------------------------- svg

std::string to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::shape_xy: return "shape-xy";
    case PlotKind::tip_path: return "tip-path-3d-projection";
    case PlotKind::wrench_vs_time: return "wrench-vs-time";
    case PlotKind::error_vs_time: return "error-vs-time";
  }
  return "unknown";
}

PlotKind plot_kind_from_string(const std::string& name) {
  for (auto k : {PlotKind::shape_xy, PlotKind::tip_path, PlotKind::wrench_vs_time,
                 PlotKind::error_vs_time}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown plot kind '" + name + "'");
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;  // room for the legend
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Roughly five round ticks covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

std::string render_svg(const PlotData& plot) {
  // data range; log axes work on log10 values
  auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : plot.series) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      const double y = s.ys[i];
      if (!std::isfinite(s.xs[i]) || !std::isfinite(y) || (plot.log_y && !(y > 0.0))) continue;
      xmin = std::min(xmin, s.xs[i]);
      xmax = std::max(xmax, s.xs[i]);
      ymin = std::min(ymin, ty(y));
      ymax = std::max(ymax, ty(y));
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  }
  if (plot.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
  }
  if (xmax - xmin < 1e-12) xmin -= 0.5, xmax += 0.5;
  if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;
  if (!plot.log_y) {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }

  double pw = kWidth - kLeft - kRight;
  double ph = kHeight - kTop - kBottom;
  if (plot.equal_aspect) {
    // same metres per pixel on both axes; grow the shorter data range
    const double sx = (xmax - xmin) / pw, sy = (ymax - ymin) / ph;
    if (sx > sy) {
      const double extra = (sx * ph - (ymax - ymin)) / 2.0;
      ymin -= extra, ymax += extra;
    } else {
      const double extra = (sy * pw - (xmax - xmin)) / 2.0;
      xmin -= extra, xmax += extra;
    }
  }
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - ty(y)) / (ymax - ymin) * ph; };
  auto py_raw = [&](double v) { return kTop + (ymax - v) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << xml_escape(plot.title) << "</text>\n";

  // axes box and ticks
  svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : linear_ticks(xmin, xmax)) {
    const double x = px(t);
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + ph + 18)
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  std::vector<double> yticks;
  if (plot.log_y) {
    const int stride = std::max(1, static_cast<int>((ymax - ymin) / 8.0));
    for (double e = ymin; e <= ymax + 1e-9; e += stride) yticks.push_back(e);
  } else {
    yticks = linear_ticks(ymin, ymax);
  }
  for (double t : yticks) {
    const double y = py_raw(t);
    const std::string label = plot.log_y ? "1e" + std::to_string(static_cast<int>(t))
                                         : tick_label(t);
    svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft)
        << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  svg << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15)
      << "\" text-anchor=\"middle\">" << xml_escape(plot.xlabel) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 18 " << num(kTop + ph / 2) << ")\">"
      << xml_escape(plot.ylabel) << "</text>\n";

  // data
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << " points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      if (plot.log_y && !(s.ys[i] > 0.0)) continue;
      svg << num(px(s.xs[i])) << ',' << num(py(s.ys[i])) << ' ';
    }
    svg << "\"/>\n";
  }

  // legend
  const double lx = kLeft + pw + 15;
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    const char* color = kPalette[k % std::size(kPalette)];
    svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 22)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
        << (plot.series[k].dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n"
        << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly + 4) << "\">"
        << xml_escape(plot.series[k].name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

PlotData shape_plot(const std::vector<LabeledShape>& shapes) {
  PlotData plot{"Rod centerline", "x [m]", "y [m]", false, true, {}};
  for (const auto& s : shapes) {
    PlotSeries series{s.label, {}, {}, false};
    for (const auto& sample : s.shape) {
      series.xs.push_back(sample.pose.position().x());
      series.ys.push_back(sample.pose.position().y());
    }
    plot.series.push_back(std::move(series));
  }
  return plot;
}

PlotData tip_path_plot(const Trace& trace, const std::vector<Vector3d>& reference) {
  PlotData plot{"Tip path, projection on the y-z plane", "y [m]", "z [m]", false, true, {}};
  PlotSeries tip{"tip", {}, {}, false};
  for (const auto& g : trace.tip_poses) {
    tip.xs.push_back(g.position().y());
    tip.ys.push_back(g.position().z());
  }
  plot.series.push_back(std::move(tip));
  if (!reference.empty()) {
    PlotSeries ref{"desired", {}, {}, true};
    for (const auto& p : reference) {
      ref.xs.push_back(p.y());
      ref.ys.push_back(p.z());
    }
    plot.series.push_back(std::move(ref));
  }
  return plot;
}

PlotData wrench_plot(const Trace& trace) {
  PlotData plot{"Tip wrench", "t [s]", "moment [N m] / force [N]", false, false, {}};
  if (trace.empty()) return plot;
  // last six entries: the tip wrench in both stacked and single layouts
  const Eigen::Index size = trace.wrenches.front().size();
  const Eigen::Index base = size - 6;
  const char* names[] = {"m_x [N m]", "m_y [N m]", "m_z [N m]",
                         "n_x [N]",   "n_y [N]",   "n_z [N]"};
  for (int c = 0; c < 6; ++c) {
    PlotSeries s{names[c], trace.times, {}, false};
    for (const auto& w : trace.wrenches) s.ys.push_back(w(base + c));
    plot.series.push_back(std::move(s));
  }
  return plot;
}

PlotData error_plot(const Trace& trace) {
  PlotData plot{"Tracking error", "t [s]", "error norm (log scale)", true, false, {}};
  plot.series.push_back({"|e|", trace.times, trace.errors, false});
  return plot;
}

void write_svg_plot(const Trace& trace, PlotKind kind, const std::string& path) {
  if (trace.empty()) throw Error(ErrorCode::InvalidArgument, "cannot plot an empty trace");
  PlotData plot;
  switch (kind) {
    case PlotKind::tip_path: plot = tip_path_plot(trace); break;
    case PlotKind::wrench_vs_time: plot = wrench_plot(trace); break;
    case PlotKind::error_vs_time: plot = error_plot(trace); break;
    case PlotKind::shape_xy:
      throw Error(ErrorCode::InvalidArgument, "shape-xy plots are built from shapes");
  }
  write_text_file(path, render_svg(plot));
}

}  // namespace pcs
