#include "pcs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <sstream>

#include "pcs/errors.hpp"

namespace pcs {

std::string to_string(ControllerKind kind) {
  return kind == ControllerKind::strain ? "strain" : "task";
}

ControllerKind controller_from_string(const std::string& name) {
  if (name == "strain") return ControllerKind::strain;
  if (name == "task") return ControllerKind::task;
  throw Error(ErrorCode::InvalidArgument, "unknown controller '" + name + "'");
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "sim dt must be > 0");
  if (!(duration >= dt)) throw Error(ErrorCode::InvalidArgument, "sim duration must be >= dt");
  if (record_every < 1) throw Error(ErrorCode::InvalidArgument, "record_every must be >= 1");
  if (samples_per_section < 1) {
    throw Error(ErrorCode::InvalidArgument, "samples_per_section must be >= 1");
  }
}

int SimConfig::steps() const { return static_cast<int>(std::lround(duration / dt)); }

namespace {

[[noreturn]] void rethrow_at(const Error& e, double t) {
  std::ostringstream msg;
  msg << "at t = " << t << " s: " << e.what();
  throw Error(e.code(), msg.str());
}

bool should_record(int step, int steps, int every) {
  return step % every == 0 || step == steps;
}

}  // namespace

// ---------------------------------------------------------------- IK

IkExperiment IkExperiment::two_section_default() {
  const double c = std::cos(std::numbers::pi / 4.0);
  const double s = std::sin(std::numbers::pi / 4.0);
  Matrix3d rot;
  rot << c, -s, 0.0,
         s, c, 0.0,
         0.0, 0.0, 1.0;
  IkExperiment ex;
  ex.target = Pose(rot, Vector3d(0.25, 0.2, 0.0));
  StrainVector bent = reference_strains(2);
  bent(1) = 10.0;
  ex.initial_guesses = {reference_strains(2), bent};
  return ex;
}

IkReport run_ik_experiment(const RodSpec& spec, const IkExperiment& experiment,
                           const IkSettings& settings, int samples_per_section) {
  IkReport report;
  for (const auto& q0 : experiment.initial_guesses) {
    IkSolution sol;
    sol.q0 = q0;
    sol.result = solve_ik(spec, experiment.target, q0, settings);
    sol.energy = potential_energy(spec, sol.result.q);
    sol.shape = fk_shape(spec, sol.result.q, samples_per_section);
    report.solutions.push_back(std::move(sol));
  }
  if (report.solutions.size() >= 2) {
    const auto& a = report.solutions[0].shape;
    const auto& b = report.solutions[1].shape;
    for (std::size_t i = 0; i < a.size(); ++i) {
      report.max_shape_distance = std::max(
          report.max_shape_distance, (a[i].pose.position() - b[i].pose.position()).norm());
    }
  }
  return report;
}

// ---------------------------------------------------------------- shape regulation

ShapeRegulation ShapeRegulation::two_section_default() {
  ShapeRegulation reg;
  reg.q_desired = reference_strains(2);
  reg.q_desired(1) = -5.0;
  reg.q_desired(7) = 10.0;
  return reg;
}

ShapeRegResult run_shape_regulation(const StaticsWorkspace& ws, const SimConfig& cfg,
                                    const ShapeRegulation& reg) {
  cfg.validate();
  const RodSpec& rod = ws.rod();
  check_strain_size(rod, reg.q_desired);
  const int n = ws.dofs();
  const StrainGains gains = StrainGains::scalar(n, reg.gain);
  gains.validate(n);

  ShapeRegResult out;
  out.qbar_d = reg.q_desired - ws.q_star();
  const VectorXd zero_rate = VectorXd::Zero(n);

  std::vector<int> snapshot_steps;
  for (double ts : reg.snapshot_times) {
    snapshot_steps.push_back(static_cast<int>(std::lround(ts / cfg.dt)));
  }

  auto closed_loop = [&](const VectorXd& qbar, StrainCommand* cmd_out) {
    const SectionChain chain(rod, qbar + ws.q_star());
    StrainCommand cmd = strain_control(ws, chain, qbar, out.qbar_d, zero_rate, gains);
    VectorXd rate = strain_rhs_distributed(ws, chain, qbar, cmd.Fbar);
    if (cmd_out) *cmd_out = std::move(cmd);
    return rate;
  };
  auto f = [&](double /*t*/, const VectorXd& x) { return closed_loop(x, nullptr); };

  VectorXd qbar = VectorXd::Zero(n);
  std::optional<Vector3d> r_prev;
  const int steps = cfg.steps();
  for (int k = 0; k <= steps; ++k) {
    const double t = k * cfg.dt;
    StrainCommand cmd;
    VectorXd k1;
    try {
      k1 = closed_loop(qbar, &cmd);
    } catch (const Error& e) {
      rethrow_at(e, t);
    }

    const VectorXd q = qbar + ws.q_star();
    if (std::find(snapshot_steps.begin(), snapshot_steps.end(), k) != snapshot_steps.end()) {
      out.snapshots.emplace_back(t, fk_shape(rod, q, cfg.samples_per_section));
    }
    if (should_record(k, steps, cfg.record_every)) {
      const Pose tip = tip_pose(rod, q);
      const auto tc = task_coordinates(tip, r_prev);
      r_prev = tc.r;
      auto& tr = out.trace;
      tr.times.push_back(t);
      tr.strains.push_back(qbar);
      tr.tip_poses.push_back(tip);
      tr.tip_r.push_back(tc.r);
      tr.wrenches.push_back(cmd.Fbar);
      tr.errors.push_back((qbar - out.qbar_d).norm());
      tr.energies.push_back(potential_energy(rod, q));
    }
    if (k == steps) {
      out.final_qbar = qbar;
      out.final_Fbar = cmd.Fbar;
      break;
    }
    try {
      qbar = rk4_step(f, qbar, t, cfg.dt, k1);
    } catch (const Error& e) {
      rethrow_at(e, t);
    }
  }
  return out;
}

// ---------------------------------------------------------------- tip tracking

Vector3d CircleTrajectory::position(double t) const {
  const double phase = 2.0 * std::numbers::pi * t / period;
  return {center_x, radius * std::cos(phase), radius * std::sin(phase)};
}

Vector3d CircleTrajectory::velocity(double t) const {
  const double omega = 2.0 * std::numbers::pi / period;
  const double phase = omega * t;
  return {0.0, -radius * omega * std::sin(phase), radius * omega * std::cos(phase)};
}

void CircleTrajectory::validate() const {
  if (!(radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "circle radius must be >= 0");
  if (!(period > 0.0)) throw Error(ErrorCode::InvalidArgument, "circle period must be > 0");
  Pose(rotation, Vector3d::Zero());  // validates the rotation
}

namespace {

TrackingResult track_task(const StaticsWorkspace& ws, const SimConfig& cfg,
                          const TrackingSettings& settings) {
  const RodSpec& rod = ws.rod();
  const auto& traj = settings.trajectory;
  const TaskGains gains = TaskGains::scalar(settings.task_gain);
  gains.validate();

  TrackingResult out;
  out.mode = ControllerKind::task;
  std::optional<Vector3d> r_prev;

  auto closed_loop = [&](double t, const VectorXd& qbar, TaskCommand* cmd_out,
                         TaskCoordinates* tc_out) {
    const SectionChain chain(rod, qbar + ws.q_star());
    const auto tc = task_coordinates(chain.poses.back(), r_prev);
    TaskCommand cmd =
        task_control(ws, chain, qbar, tc, traj.position(t), traj.velocity(t), gains);
    out.max_pinv_residual =
        std::max(out.max_pinv_residual, (cmd.PB * cmd.wrench - cmd.demand).norm());
    VectorXd rate = strain_rhs_tip(ws, chain, qbar, cmd.wrench);
    if (cmd_out) *cmd_out = std::move(cmd);
    if (tc_out) *tc_out = tc;
    return rate;
  };
  auto f = [&](double t, const VectorXd& x) { return closed_loop(t, x, nullptr, nullptr); };

  VectorXd qbar = VectorXd::Zero(ws.dofs());
  const int steps = cfg.steps();
  for (int k = 0; k <= steps; ++k) {
    const double t = k * cfg.dt;
    TaskCommand cmd;
    TaskCoordinates tc;
    try {
      const VectorXd k1 = closed_loop(t, qbar, &cmd, &tc);
      r_prev = tc.r;
      if (should_record(k, steps, cfg.record_every)) {
        const VectorXd q = qbar + ws.q_star();
        auto& tr = out.trace;
        tr.times.push_back(t);
        tr.strains.push_back(qbar);
        tr.tip_poses.push_back(tip_pose(rod, q));
        tr.tip_r.push_back(tc.r);
        tr.wrenches.push_back(cmd.wrench);
        tr.errors.push_back(cmd.error.norm());
        tr.energies.push_back(potential_energy(rod, q));
        out.desired.push_back(traj.position(t));
      }
      if (k == steps) break;
      qbar = rk4_step(f, qbar, t, cfg.dt, k1);
    } catch (const Error& e) {
      rethrow_at(e, t);
    }
  }
  return out;
}

TrackingResult track_strain(const StaticsWorkspace& ws, const SimConfig& cfg,
                            const TrackingSettings& settings) {
  const RodSpec& rod = ws.rod();
  const auto& traj = settings.trajectory;
  const int n = ws.dofs();
  const StrainGains gains = StrainGains::scalar(n, settings.strain_gain);
  gains.validate(n);

  TrackingResult out;
  out.mode = ControllerKind::strain;

  StrainVector q_d = ws.q_star();
  VectorXd qbar_d_prev;
  VectorXd qbar_d;
  VectorXd qbar_d_dot = VectorXd::Zero(n);
  double t_step = 0.0;

  auto closed_loop = [&](double t, const VectorXd& qbar, StrainCommand* cmd_out) {
    // desired strain extrapolated through the step at the backward-difference rate
    const VectorXd qd_t = qbar_d + (t - t_step) * qbar_d_dot;
    const SectionChain chain(rod, qbar + ws.q_star());
    StrainCommand cmd = strain_control(ws, chain, qbar, qd_t, qbar_d_dot, gains);
    VectorXd rate = strain_rhs_distributed(ws, chain, qbar, cmd.Fbar);
    if (cmd_out) *cmd_out = std::move(cmd);
    return rate;
  };
  auto f = [&](double t, const VectorXd& x) { return closed_loop(t, x, nullptr); };

  VectorXd qbar = VectorXd::Zero(n);
  std::optional<Vector3d> r_prev;
  const int steps = cfg.steps();
  for (int k = 0; k <= steps; ++k) {
    const double t = k * cfg.dt;
    t_step = t;
    try {
      const Vector3d x_d = traj.position(t);
      const IkResult ik = solve_ik_tracking(rod, Pose(traj.rotation, x_d), q_d, settings.ik);
      if (!ik.converged) {
        std::ostringstream msg;
        msg << "IK did not converge (error " << ik.final_error << " after " << ik.iterations
            << " iterations)";
        throw Error(ErrorCode::NotConverged, msg.str());
      }
      if (k == 0) {
        out.cold_ik_iterations = ik.iterations;
      } else {
        out.max_warm_ik_iterations = std::max(out.max_warm_ik_iterations, ik.iterations);
      }
      q_d = ik.q;
      qbar_d_prev = qbar_d;
      qbar_d = q_d - ws.q_star();
      qbar_d_dot = (k == 0) ? VectorXd::Zero(n) : VectorXd((qbar_d - qbar_d_prev) / cfg.dt);

      StrainCommand cmd;
      const VectorXd k1 = closed_loop(t, qbar, &cmd);
      if (should_record(k, steps, cfg.record_every)) {
        const VectorXd q = qbar + ws.q_star();
        const Pose tip = tip_pose(rod, q);
        const auto tc = task_coordinates(tip, r_prev);
        r_prev = tc.r;
        auto& tr = out.trace;
        tr.times.push_back(t);
        tr.strains.push_back(qbar);
        tr.tip_poses.push_back(tip);
        tr.tip_r.push_back(tc.r);
        tr.wrenches.push_back(cmd.Fbar);
        tr.errors.push_back((tip.position() - x_d).norm());
        tr.energies.push_back(potential_energy(rod, q));
        out.desired.push_back(x_d);
      }
      if (k == steps) break;
      qbar = rk4_step(f, qbar, t, cfg.dt, k1);
    } catch (const Error& e) {
      rethrow_at(e, t);
    }
  }
  return out;
}

}  // namespace

TrackingResult run_tip_tracking(const StaticsWorkspace& ws, const SimConfig& cfg,
                                const TrackingSettings& settings, ControllerKind mode) {
  cfg.validate();
  settings.trajectory.validate();
  settings.ik.validate();
  return mode == ControllerKind::task ? track_task(ws, cfg, settings)
                                      : track_strain(ws, cfg, settings);
}

// ---------------------------------------------------------------- free decay

FreeDecay run_free_decay(const StaticsWorkspace& ws, const VectorXd& qbar0, double dt,
                         int steps) {
  check_strain_size(ws.rod(), qbar0);
  const VectorXd no_wrench = VectorXd::Zero(ws.dofs());
  auto f = [&](double /*t*/, const VectorXd& x) {
    return strain_rhs_distributed(ws, x, no_wrench);
  };
  const VectorXd& K = ws.K();
  const VectorXd& D = ws.D();

  FreeDecay out;
  VectorXd qbar = qbar0;
  out.norms.push_back(qbar.norm());
  out.energies.push_back(0.5 * qbar.dot(K.cwiseProduct(qbar)));
  for (int k = 0; k < steps; ++k) {
    const VectorXd rate = f(k * dt, qbar);
    // dU/dt = qbar^T K qbar' must equal -qbar'^T D qbar'
    const double dissipation = rate.dot(D.cwiseProduct(rate));
    const double dU = qbar.dot(K.cwiseProduct(rate));
    const double scale = std::max(dissipation, 1e-300);
    out.max_passivity_gap = std::max(out.max_passivity_gap, std::abs(dU + dissipation) / scale);

    qbar = rk4_step(f, qbar, k * dt, dt, rate);
    const double norm = qbar.norm();
    if (norm > out.norms.back()) out.monotone = false;
    out.norms.push_back(norm);
    out.energies.push_back(0.5 * qbar.dot(K.cwiseProduct(qbar)));
  }
  return out;
}

std::vector<FreeDecay> run_free_decay_batch(const StaticsWorkspace& ws,
                                            const std::vector<VectorXd>& initial, double dt,
                                            int steps, Exec exec) {
  std::vector<FreeDecay> out(initial.size());
  std::vector<std::exception_ptr> failures(initial.size());
  const int count = static_cast<int>(initial.size());
  auto run_one = [&](int i) {
    try {
      out[i] = run_free_decay(ws, initial[i], dt, steps);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) run_one(i);
  } else {
    for (int i = 0; i < count; ++i) run_one(i);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

}  // namespace pcs
