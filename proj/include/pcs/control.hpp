#pragma once

#include <optional>

#include "pcs/statics.hpp"

namespace pcs {

// Symmetric positive definite gain matrices.
struct StrainGains {
  MatrixXd Kbar;
  static StrainGains scalar(int dofs, double k);
  void validate(int dofs) const;
};

struct TaskGains {
  Matrix3d Kt = 2.0 * Matrix3d::Identity();
  static TaskGains scalar(double k) { return {k * Matrix3d::Identity()}; }
  void validate() const;
};

/// Minimal tip coordinates y = (r, x_tip).
struct TaskCoordinates {
  Vector3d r;      // exponential coordinates of R(L)
  Vector3d x_tip;  // m
};

struct StrainCommand {
  VectorXd u;     // generalized force Jbar^T Fbar
  VectorXd Fbar;  // stacked section-end wrenches
};

struct TaskMatrices {
  MatrixXd Abar;  // 6 x 6n
  Matrix6d Bbar;
  Matrix6d Cbar;
};

struct TaskCommand {
  Wrench wrench;
  Eigen::Matrix<double, 3, 6> PB;  // P Bbar
  Vector3d demand;                 // -P Abar qbar - P Cbar G + xd_dot - Kt e
  Vector3d error;                  // e = x_tip - x_d
};

/// Strain-space feedback linearization:
///   u = D (-Kbar e - A e - A qbar_d + qbar_d_dot) - N(q) G,  e = qbar - qbar_d,
/// and Fbar = Jbar^-T u. The closed loop obeys e' = -Kbar e.
StrainCommand strain_control(const StaticsWorkspace& ws, const VectorXd& qbar,
                             const VectorXd& qbar_d, const VectorXd& qbar_d_dot,
                             const StrainGains& gains);
StrainCommand strain_control(const StaticsWorkspace& ws, const SectionChain& chain,
                             const VectorXd& qbar, const VectorXd& qbar_d,
                             const VectorXd& qbar_d_dot, const StrainGains& gains);

/// Principal rotation log of the tip, moved onto the 2 pi branch closest to
/// r_prev when one is given.
TaskCoordinates task_coordinates(const Pose& tip, const std::optional<Vector3d>& r_prev = {});

// T = diag(W(r)^-1, R(L)), with y' = T [omega; nu].
Matrix6d task_T_matrix(const TaskCoordinates& tc, const Matrix3d& R_tip);

TaskMatrices task_matrices(const StaticsWorkspace& ws, const VectorXd& qbar,
                           const TaskCoordinates& tc);
TaskMatrices task_matrices(const StaticsWorkspace& ws, const SectionChain& chain,
                           const VectorXd& qbar, const TaskCoordinates& tc);

/// Task-space output linearization of the tip position:
///   F = (P Bbar)^+ (-P Abar qbar - P Cbar G + xd_dot - Kt e).
/// Throws RankDeficient when sigma_3(P Bbar) < 1e-8 sigma_1(P Bbar).
TaskCommand task_control(const StaticsWorkspace& ws, const VectorXd& qbar,
                         const TaskCoordinates& tc, const Vector3d& x_d,
                         const Vector3d& x_d_dot, const TaskGains& gains);
TaskCommand task_control(const StaticsWorkspace& ws, const SectionChain& chain,
                         const VectorXd& qbar, const TaskCoordinates& tc,
                         const Vector3d& x_d, const Vector3d& x_d_dot,
                         const TaskGains& gains);

inline constexpr double kTaskRankCutoff = 1e-8;

}  // namespace pcs
