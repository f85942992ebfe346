#pragma once

#include "pcs/kinematics.hpp"
#include "pcs/rod.hpp"

namespace pcs {

struct IkSettings {
  double tolerance = 1e-6;  // on |V|, mixed rad and m
  int max_iterations = 200;
  double step_scale = 1.0;    // in (0, 1]
  double pinv_cutoff = 1e-8;  // relative to the largest singular value
  int max_backtracks = 4;     // step halvings allowed when the error grows

  void validate() const;
};

struct IkResult {
  StrainVector q;
  int iterations = 0;
  double final_error = 0.0;
  bool converged = false;
  // |V| at every iterate, starting with the initial guess.
  std::vector<double> error_history;
};

// Moore-Penrose pseudoinverse by SVD with a relative singular-value cutoff.
MatrixXd pseudo_inverse(const MatrixXd& m, double relative_cutoff);

// V = vee(log(g(L)^-1 g_d)), the body-frame tip pose error.
Twist tip_pose_error(const RodSpec& spec, const StrainVector& q, const Pose& target);

/// Newton-Raphson IK: q <- q + step * pinv(J(L, q)) V until |V| < tolerance.
/// Never throws NotConverged; the best iterate is returned with
/// converged = false instead. RotationNearPi propagates.
IkResult solve_ik(const RodSpec& spec, const Pose& target, const StrainVector& q0,
                  const IkSettings& settings = {});

// Warm-started variant for consecutive trajectory samples.
IkResult solve_ik_tracking(const RodSpec& spec, const Pose& target,
                           const StrainVector& q_warm, const IkSettings& settings = {});

}  // namespace pcs
