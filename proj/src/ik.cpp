#include "pcs/ik.hpp"

#include <cmath>
#include <limits>

#include "pcs/errors.hpp"

namespace pcs {

void IkSettings::validate() const {
  if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "IK tolerance must be > 0");
  if (max_iterations < 1) {
    throw Error(ErrorCode::InvalidArgument, "IK max_iterations must be >= 1");
  }
  if (!(step_scale > 0.0 && step_scale <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "IK step_scale must lie in (0, 1]");
  }
  if (!(pinv_cutoff >= 0.0 && pinv_cutoff < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "IK pinv_cutoff must lie in [0, 1)");
  }
  if (max_backtracks < 0) {
    throw Error(ErrorCode::InvalidArgument, "IK max_backtracks must be >= 0");
  }
}

MatrixXd pseudo_inverse(const MatrixXd& m, double relative_cutoff) {
  const Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? relative_cutoff * sv(0) : 0.0;
  VectorXd inv = VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Twist tip_pose_error(const RodSpec& spec, const StrainVector& q, const Pose& target) {
  return log_se3(tip_pose(spec, q).inverse() * target);
}

IkResult solve_ik(const RodSpec& spec, const Pose& target, const StrainVector& q0,
                  const IkSettings& settings) {
  settings.validate();
  check_strain_size(spec, q0);

  IkResult res;
  res.q = q0;
  Twist v = tip_pose_error(spec, res.q, target);
  double err = v.norm();
  res.error_history.push_back(err);

  while (err >= settings.tolerance && res.iterations < settings.max_iterations) {
    const MatrixXd J = jacobian(spec, res.q, spec.length);
    const VectorXd step = pseudo_inverse(J, settings.pinv_cutoff) * v;

    // A trial that lands at the log branch cut counts as an error increase;
    // if every halving does, the last attempt is re-evaluated and throws.
    auto trial_error = [&](const StrainVector& q, Twist& out) {
      try {
        out = tip_pose_error(spec, q, target);
        return out.norm();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::RotationNearPi) throw;
        return std::numeric_limits<double>::infinity();
      }
    };

    double scale = settings.step_scale;
    StrainVector trial = res.q + scale * step;
    Twist v_trial;
    double err_trial = trial_error(trial, v_trial);
    for (int b = 0; b < settings.max_backtracks && !(err_trial <= err); ++b) {
      scale *= 0.5;
      trial = res.q + scale * step;
      err_trial = trial_error(trial, v_trial);
    }
    if (std::isinf(err_trial)) v_trial = tip_pose_error(spec, trial, target);

    res.q = std::move(trial);
    v = v_trial;
    err = v.norm();
    ++res.iterations;
    res.error_history.push_back(err);
  }

  res.final_error = err;
  res.converged = err < settings.tolerance;
  return res;
}

IkResult solve_ik_tracking(const RodSpec& spec, const Pose& target,
                           const StrainVector& q_warm, const IkSettings& settings) {
  return solve_ik(spec, target, q_warm, settings);
}

}  // namespace pcs
