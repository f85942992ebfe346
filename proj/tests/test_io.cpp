#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pcs/errors.hpp"
#include "pcs/io.hpp"
#include "test_util.hpp"

using namespace pcs;

namespace {

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ErrorCode code_of(const std::string& json_text) {
  try {
    parse_config(json_text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << json_text;
  return ErrorCode::Io;
}

Trace small_trace() {
  const StaticsWorkspace ws(RodSpec::uniform(1));
  SimConfig cfg;
  cfg.duration = 0.003;
  ShapeRegulation reg;
  reg.q_desired = reference_strains(1);
  reg.q_desired(1) = 3.0;
  reg.snapshot_times = {};
  return run_shape_regulation(ws, cfg, reg).trace;
}

}  // namespace

TEST(Config, EmptyObjectKeepsDefaults) {
  const ExperimentConfig c = parse_config("{}");
  EXPECT_EQ(c.rod.num_sections, 1);
  EXPECT_DOUBLE_EQ(c.rod.youngs_modulus, 1e6);
  EXPECT_EQ(c.quadrature_nodes, 5);
  EXPECT_DOUBLE_EQ(c.sim.dt, 1e-3);
  EXPECT_EQ(c.output.directory, "out");
  EXPECT_EQ(c.ik_experiment.initial_guesses.size(), 2u);
}

TEST(Config, ReadsEverySection) {
  const ExperimentConfig c = parse_config(R"({
    "rod": {"num_sections": 3, "radius": 0.02, "gravity": [0, 0, 0, 0, 0, 0]},
    "statics": {"quadrature_nodes": 7},
    "sim": {"dt": 0.002, "duration": 1.0, "controller": "task", "record_every": 5},
    "ik": {"tolerance": 1e-8, "max_iterations": 50},
    "gains": {"strain": 3.0, "task": 4.0},
    "trajectory": {"center_x": 0.2, "radius": 0.05, "period": 10},
    "shape_regulation": {"snapshot_times": [0, 1]},
    "output": {"directory": "elsewhere", "svg": false}
  })");
  EXPECT_EQ(c.rod.num_sections, 3);
  EXPECT_DOUBLE_EQ(c.rod.radius, 0.02);
  EXPECT_EQ(c.rod.gravity, Twist::Zero());
  EXPECT_EQ(c.quadrature_nodes, 7);
  EXPECT_EQ(c.sim.controller, ControllerKind::task);
  EXPECT_EQ(c.sim.record_every, 5);
  EXPECT_DOUBLE_EQ(c.ik.tolerance, 1e-8);
  EXPECT_DOUBLE_EQ(c.shape_regulation.gain, 3.0);
  EXPECT_DOUBLE_EQ(c.task_gain, 4.0);
  EXPECT_DOUBLE_EQ(c.trajectory.period, 10.0);
  EXPECT_EQ(c.shape_regulation.snapshot_times.size(), 2u);
  EXPECT_FALSE(c.output.svg);
  EXPECT_TRUE(c.output.csv);
}

TEST(Config, Errors) {
  EXPECT_EQ(code_of("{"), ErrorCode::Config);
  EXPECT_EQ(code_of(R"({"rod": {"lenght": 0.3}})"), ErrorCode::Config);
  EXPECT_EQ(code_of(R"({"bogus": 1})"), ErrorCode::Config);
  EXPECT_EQ(code_of(R"({"sim": {"dt": "fast"}})"), ErrorCode::Config);
  EXPECT_EQ(code_of(R"({"sim": {"controller": "pid"}})"), ErrorCode::Config);
  EXPECT_EQ(code_of(R"({"rod": {"gravity": [1, 2]}})"), ErrorCode::Config);
  EXPECT_EQ(code_of(R"({"sim": {"dt": -1}})"), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of(R"({"rod": {"poisson_ratio": 0.7}})"), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of(R"({"gains": {"task": 0}})"), ErrorCode::InvalidArgument);
  try {
    parse_config(R"({"rod": {"foo": 1}})");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("rod.foo"), std::string::npos) << e.what();
  }
}

TEST(Config, MissingFile) {
  try {
    load_config("/nonexistent/config.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
  }
}

TEST(Config, ShippedConfigsLoad) {
  const std::filesystem::path dir = PCS_SOURCE_DIR "/configs";
  int n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_config(entry.path().string())) << entry.path();
    ++n;
  }
  EXPECT_GE(n, 4);
}

TEST(Csv, FormatRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

TEST(Csv, TraceColumns) {
  const Trace tr = small_trace();
  const auto rows = lines(trace_csv(tr));
  ASSERT_EQ(rows.size(), tr.size() + 1);
  EXPECT_EQ(rows[0],
            "t,q1,q2,q3,q4,q5,q6,x,y,z,r1,r2,r3,F1,F2,F3,F4,F5,F6,error,energy");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(count(rows[i], ","), 20);
  // the tip x column of the first row is the straight rod length
  std::istringstream first(rows[1]);
  std::vector<double> cols;
  for (std::string cell; std::getline(first, cell, ',');) cols.push_back(std::stod(cell));
  EXPECT_EQ(cols[7], tr.tip_poses[0].position().x());
  EXPECT_EQ(cols[19], tr.errors[0]);
}

TEST(Csv, EmptyTraceIsHeaderOnly) {
  EXPECT_EQ(trace_csv(Trace{}), "t,x,y,z,r1,r2,r3,error,energy\n");
}

TEST(Csv, ShapeColumns) {
  const RodSpec rod = RodSpec::uniform(1);
  const auto shape = fk_shape(rod, reference_strains(1), 4);
  const auto rows = lines(shape_csv(shape));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "X,x,y,z,R11,R12,R13,R21,R22,R23,R31,R32,R33");
  EXPECT_EQ(rows.back(), "0.29999999999999999,0.29999999999999999,0,0,1,0,0,0,1,0,0,0,1");
}

TEST(Csv, WriteFailureIsIo) {
  try {
    write_text_file("/nonexistent/dir/file.csv", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Svg, SeriesAndLegend) {
  PlotData p{"title & more", "t [s]", "y", false, false, {}};
  p.series.push_back({"a", {0, 1, 2}, {0, 1, 4}, false});
  p.series.push_back({"b", {0, 1, 2}, {1, 1, 1}, true});
  const std::string svg = render_svg(p);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(svg, "<polyline"), 2);
  EXPECT_EQ(count(svg, "stroke-dasharray"), 2);  // series and its legend entry
  EXPECT_NE(svg.find("title &amp; more"), std::string::npos);
  EXPECT_NE(svg.find(">a</text>"), std::string::npos);
  EXPECT_NE(svg.find(">b</text>"), std::string::npos);
}

TEST(Svg, LogScaleSkipsNonPositive) {
  PlotData p{"e", "t", "e", true, false, {}};
  p.series.push_back({"e", {0, 1, 2, 3}, {1.0, 1e-3, 0.0, 1e-6}, false});
  const std::string svg = render_svg(p);
  EXPECT_NE(svg.find(">1e0<"), std::string::npos);
  EXPECT_NE(svg.find(">1e-6<"), std::string::npos);
  // three plotted points
  const auto start = svg.find("points=\"");
  const auto end = svg.find('"', start + 8);
  EXPECT_EQ(count(svg.substr(start, end - start), ","), 3);
}

TEST(Svg, StraightShapeIsFlat) {
  const RodSpec rod = RodSpec::uniform(1);
  const PlotData p = shape_plot({{"straight", fk_shape(rod, reference_strains(1), 10)}});
  ASSERT_EQ(p.series.size(), 1u);
  EXPECT_EQ(p.series[0].xs.size(), 11u);
  for (double y : p.series[0].ys) EXPECT_EQ(y, 0.0);
  EXPECT_TRUE(p.equal_aspect);
}

TEST(Svg, TraceBuildersAndKinds) {
  const Trace tr = small_trace();
  EXPECT_EQ(wrench_plot(tr).series.size(), 6u);
  EXPECT_TRUE(error_plot(tr).log_y);
  EXPECT_EQ(tip_path_plot(tr, {Vector3d::Zero()}).series.size(), 2u);
  for (auto k : {PlotKind::shape_xy, PlotKind::tip_path, PlotKind::wrench_vs_time,
                 PlotKind::error_vs_time}) {
    EXPECT_EQ(plot_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(plot_kind_from_string("pie"), Error);
  EXPECT_THROW(write_svg_plot(Trace{}, PlotKind::error_vs_time, "/tmp/unused.svg"), Error);
  EXPECT_THROW(write_svg_plot(tr, PlotKind::shape_xy, "/tmp/unused.svg"), Error);

  const auto path = std::filesystem::temp_directory_path() / "pcs_test_error.svg";
  write_svg_plot(tr, PlotKind::error_vs_time, path.string());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("<polyline"), std::string::npos);
  std::filesystem::remove(path);
}
