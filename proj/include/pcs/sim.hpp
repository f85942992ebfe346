#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pcs/control.hpp"
#include "pcs/ik.hpp"
#include "pcs/kinematics.hpp"
#include "pcs/parallel.hpp"
#include "pcs/statics.hpp"

namespace pcs {

enum class ControllerKind { strain, task };

std::string to_string(ControllerKind kind);
ControllerKind controller_from_string(const std::string& name);

struct SimConfig {
  double dt = 1e-3;        // s
  double duration = 5.0;   // s
  ControllerKind controller = ControllerKind::strain;
  int record_every = 1;    // steps
  int samples_per_section = 40;

  void validate() const;
  int steps() const;  // round(duration / dt)
};

/// Recorded closed-loop history. All columns have the same length.
struct Trace {
  std::vector<double> times;
  std::vector<VectorXd> strains;  // qbar
  std::vector<Pose> tip_poses;
  std::vector<Vector3d> tip_r;    // branch-continuous exponential coordinates
  std::vector<VectorXd> wrenches; // stacked section wrenches or the tip wrench
  std::vector<double> errors;     // controller error norm
  std::vector<double> energies;   // strain potential energy, J

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

/// Classical fourth-order Runge-Kutta step for x' = f(t, x).
template <class F>
VectorXd rk4_step(F&& f, const VectorXd& x, double t, double dt) {
  const VectorXd k1 = f(t, x);
  const VectorXd k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
  const VectorXd k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
  const VectorXd k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Same step with the first stage already evaluated by the caller.
template <class F>
VectorXd rk4_step(F&& f, const VectorXd& x, double t, double dt, const VectorXd& k1) {
  const VectorXd k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
  const VectorXd k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
  const VectorXd k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// ---------------------------------------------------------------- IK

struct IkExperiment {
  Pose target;
  std::vector<StrainVector> initial_guesses;

  // Two-section target pose and initial guesses of the IK experiment.
  static IkExperiment two_section_default();
};

struct IkSolution {
  StrainVector q0;
  IkResult result;
  double energy = 0.0;
  std::vector<ShapeSample> shape;
};

struct IkReport {
  std::vector<IkSolution> solutions;
  // Largest distance between same-index centerline samples of the first two
  // solutions (0 with fewer than two).
  double max_shape_distance = 0.0;
};

IkReport run_ik_experiment(const RodSpec& spec, const IkExperiment& experiment,
                           const IkSettings& settings, int samples_per_section);

// ---------------------------------------------------------------- shape regulation

struct ShapeRegulation {
  StrainVector q_desired;
  double gain = 2.0;  // Kbar = gain * I
  std::vector<double> snapshot_times{0.0, 0.5, 1.0, 1.5, 2.0};

  static ShapeRegulation two_section_default();
};

struct ShapeRegResult {
  Trace trace;
  VectorXd qbar_d;
  std::vector<std::pair<double, std::vector<ShapeSample>>> snapshots;
  VectorXd final_qbar;
  VectorXd final_Fbar;  // control wrench at the final state
};

ShapeRegResult run_shape_regulation(const StaticsWorkspace& ws, const SimConfig& cfg,
                                    const ShapeRegulation& reg);

// ---------------------------------------------------------------- tip tracking

/// x_d(t) = (center_x, radius cos(2 pi t / period), radius sin(2 pi t / period)).
struct CircleTrajectory {
  double center_x = 0.25;
  double radius = 0.1;
  double period = 20.0;
  // Tip orientation requested from IK in strain mode.
  Matrix3d rotation = Matrix3d::Identity();

  Vector3d position(double t) const;
  Vector3d velocity(double t) const;
  void validate() const;
};

struct TrackingSettings {
  CircleTrajectory trajectory;
  double strain_gain = 2.0;
  double task_gain = 2.0;
  IkSettings ik;
};

struct TrackingResult {
  Trace trace;
  ControllerKind mode = ControllerKind::task;
  std::vector<Vector3d> desired;     // x_d at recorded samples
  // task mode: max |P Bbar F - demand| over every control evaluation
  double max_pinv_residual = 0.0;
  // strain mode
  int cold_ik_iterations = 0;
  int max_warm_ik_iterations = 0;
};

/// Errors are rethrown as pcs::Error with the failing time in the message.
TrackingResult run_tip_tracking(const StaticsWorkspace& ws, const SimConfig& cfg,
                                const TrackingSettings& settings, ControllerKind mode);

// ---------------------------------------------------------------- free decay

struct FreeDecay {
  std::vector<double> norms;     // |qbar| per step, including t = 0
  std::vector<double> energies;  // potential energy per step
  // max over steps of |dU/dt + qbar'^T D qbar'| / max(|qbar'^T D qbar'|, tiny)
  double max_passivity_gap = 0.0;
  bool monotone = true;
};

/// Unforced relaxation (zero wrench; gravity from the workspace rod).
FreeDecay run_free_decay(const StaticsWorkspace& ws, const VectorXd& qbar0, double dt,
                         int steps);

/// Independent free-decay runs; the parallel policy distributes runs over
/// threads and returns exactly the serial results.
std::vector<FreeDecay> run_free_decay_batch(const StaticsWorkspace& ws,
                                            const std::vector<VectorXd>& initial, double dt,
                                            int steps, Exec exec = Exec::serial);

}  // namespace pcs
