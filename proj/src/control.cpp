#include "pcs/control.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pcs/errors.hpp"

namespace pcs {

namespace {

void check_spd(const MatrixXd& m, const char* name) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " is not positive definite");
  }
}

}  // namespace

StrainGains StrainGains::scalar(int dofs, double k) {
  return {k * MatrixXd::Identity(dofs, dofs)};
}

void StrainGains::validate(int dofs) const {
  if (Kbar.rows() != dofs || Kbar.cols() != dofs) {
    std::ostringstream msg;
    msg << "strain gain must be " << dofs << "x" << dofs;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  check_spd(Kbar, "strain gain");
}

void TaskGains::validate() const { check_spd(Kt, "task gain"); }

StrainCommand strain_control(const StaticsWorkspace& ws, const SectionChain& chain,
                             const VectorXd& qbar, const VectorXd& qbar_d,
                             const VectorXd& qbar_d_dot, const StrainGains& gains) {
  const VectorXd e = qbar - qbar_d;
  const VectorXd& A = ws.A();
  const VectorXd inner =
      -gains.Kbar * e - A.cwiseProduct(e) - A.cwiseProduct(qbar_d) + qbar_d_dot;
  StrainCommand cmd;
  cmd.u = ws.D().cwiseProduct(inner) - gravity_force(ws, chain);
  cmd.Fbar = solve_wrench_from_u(chain, cmd.u);
  return cmd;
}

StrainCommand strain_control(const StaticsWorkspace& ws, const VectorXd& qbar,
                             const VectorXd& qbar_d, const VectorXd& qbar_d_dot,
                             const StrainGains& gains) {
  const auto& rod = ws.rod();
  check_strain_size(rod, qbar);
  check_strain_size(rod, qbar_d);
  check_strain_size(rod, qbar_d_dot);
  gains.validate(ws.dofs());
  return strain_control(ws, SectionChain(rod, qbar + ws.q_star()), qbar, qbar_d,
                        qbar_d_dot, gains);
}

TaskCoordinates task_coordinates(const Pose& tip, const std::optional<Vector3d>& r_prev) {
  Vector3d r = log_so3(tip.rotation());
  const double theta = r.norm();
  if (r_prev && theta > 0.0) {
    const Vector3d axis = r / theta;
    const double two_pi = 2.0 * std::numbers::pi;
    const double k0 = std::round((axis.dot(*r_prev) - theta) / two_pi);
    Vector3d best = r;
    double best_dist = (r - *r_prev).norm();
    for (double k = k0 - 1.0; k <= k0 + 1.0; k += 1.0) {
      const Vector3d cand = (theta + two_pi * k) * axis;
      const double dist = (cand - *r_prev).norm();
      if (dist < best_dist) {
        best = cand;
        best_dist = dist;
      }
    }
    r = best;
  }
  return {r, tip.position()};
}

Matrix6d task_T_matrix(const TaskCoordinates& tc, const Matrix3d& R_tip) {
  Matrix6d T = Matrix6d::Zero();
  T.topLeftCorner<3, 3>() = W_inverse(tc.r);
  T.bottomRightCorner<3, 3>() = R_tip;
  return T;
}

TaskMatrices task_matrices(const StaticsWorkspace& ws, const SectionChain& chain,
                           const VectorXd& /*qbar*/, const TaskCoordinates& tc) {
  const Matrix6d T = task_T_matrix(tc, chain.poses.back().rotation());
  const MatrixXd J = jacobian(chain, ws.rod().length);
  const MatrixXd TJ = T * J;
  const MatrixXd TJDinv = TJ * ws.D_inv().asDiagonal();
  TaskMatrices out;
  out.Abar = TJ * ws.A().asDiagonal();
  out.Bbar = TJDinv * J.transpose();
  out.Cbar = TJDinv * gravity_matrix(ws, chain);
  return out;
}

TaskMatrices task_matrices(const StaticsWorkspace& ws, const VectorXd& qbar,
                           const TaskCoordinates& tc) {
  check_strain_size(ws.rod(), qbar);
  return task_matrices(ws, SectionChain(ws.rod(), qbar + ws.q_star()), qbar, tc);
}

TaskCommand task_control(const StaticsWorkspace& ws, const SectionChain& chain,
                         const VectorXd& qbar, const TaskCoordinates& tc,
                         const Vector3d& x_d, const Vector3d& x_d_dot,
                         const TaskGains& gains) {
  // P T = [0, R(L)], so only the linear rows of J are needed and W(r) never
  // enters; the law stays defined when |r| crosses 2 pi.
  const MatrixXd J = jacobian(chain, ws.rod().length);
  const MatrixXd PTJ = chain.poses.back().rotation() * J.bottomRows<3>();
  const MatrixXd PTJDinv = PTJ * ws.D_inv().asDiagonal();

  TaskCommand cmd;
  cmd.error = tc.x_tip - x_d;
  cmd.PB = PTJDinv * J.transpose();
  cmd.demand = -PTJ * ws.A().cwiseProduct(qbar) -
               PTJDinv * (gravity_matrix(ws, chain) * ws.rod().gravity) + x_d_dot -
               gains.Kt * cmd.error;

  const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 6>> svd(
      cmd.PB, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector3d sv = svd.singularValues();
  if (!(sv(2) >= kTaskRankCutoff * sv(0))) {
    std::ostringstream msg;
    msg << "P*Bbar is rank deficient (sigma = " << sv.transpose() << ")";
    throw Error(ErrorCode::RankDeficient, msg.str());
  }
  // minimum-norm solution of PB F = demand
  const Vector3d coeff = (svd.matrixU().transpose() * cmd.demand).cwiseQuotient(sv);
  cmd.wrench = svd.matrixV().leftCols<3>() * coeff;
  return cmd;
}

TaskCommand task_control(const StaticsWorkspace& ws, const VectorXd& qbar,
                         const TaskCoordinates& tc, const Vector3d& x_d,
                         const Vector3d& x_d_dot, const TaskGains& gains) {
  check_strain_size(ws.rod(), qbar);
  gains.validate();
  return task_control(ws, SectionChain(ws.rod(), qbar + ws.q_star()), qbar, tc, x_d,
                      x_d_dot, gains);
}

}  // namespace pcs
