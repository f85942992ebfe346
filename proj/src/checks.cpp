#include "pcs/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "pcs/control.hpp"
#include "pcs/kinematics.hpp"
#include "pcs/statics.hpp"

namespace pcs {

namespace {

class Sampler {
 public:
  explicit Sampler(unsigned seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }

  Twist twist(double ang, double lin) {
    Twist xi;
    for (int i = 0; i < 3; ++i) xi(i) = uniform(-ang, ang);
    for (int i = 3; i < 6; ++i) xi(i) = uniform(-lin, lin);
    return xi;
  }

  // q* plus moderate curvature and a little stretch/shear in every section
  StrainVector strains(int n) {
    StrainVector q = reference_strains(n);
    for (int k = 0; k < n; ++k) q.segment<6>(6 * k) += twist(4.0, 0.2);
    return q;
  }

 private:
  std::mt19937 rng_;
};

double rel(double err, double scale) { return err / std::max(scale, 1e-300); }

// Gravitational potential -rho A int g . p(X) dX with the workspace rule.
double gravity_potential(const StaticsWorkspace& ws, const StrainVector& q) {
  const SectionChain chain(ws.rod(), q);
  const Vector3d g = linear(ws.rod().gravity);
  const double rho_a = ws.screw_inertia()(3, 3);
  double u = 0.0;
  for (int k = 0; k < chain.size(); ++k) {
    for (int j = 0; j < ws.rule().order(); ++j) {
      const double s = ws.rule().node(j, 0.0, chain.lengths[k]);
      const double w = ws.rule().weight(j, 0.0, chain.lengths[k]);
      u -= w * rho_a * g.dot((chain.poses[k] * exp_se3(chain.strains[k], s)).position());
    }
  }
  return u;
}

}  // namespace

std::vector<CheckResult> run_invariant_checks(const RodSpec& rod, int quadrature_nodes,
                                              unsigned seed) {
  rod.validate();
  const StaticsWorkspace ws(rod, quadrature_nodes);
  const int n = rod.num_sections;
  const int dofs = ws.dofs();
  Sampler rnd(seed);
  std::vector<CheckResult> out;
  auto record = [&out](const char* name, double measured, double tol) {
    out.push_back({name, measured <= tol, measured, tol});
  };

  {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Twist xi = rnd.twist(3.0 / std::sqrt(3.0), 1.0);
      worst = std::max(worst, (log_se3(exp_se3(xi, 1.0)) - xi).norm());
    }
    record("exp/log roundtrip", worst, 1e-10);
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Twist xi = rnd.twist(2.0, 1.0);
      const double s = rnd.uniform(0.0, 1.0);
      const Matrix6d expm = (s * ad(xi)).exp();
      worst = std::max(worst, (Ad(exp_se3(xi, s)) - expm).cwiseAbs().maxCoeff());
    }
    record("Ad(exp) vs matrix exponential of ad", worst, 1e-10);
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Twist xi = rnd.twist(20.0, 1.5);
      const double s = rnd.uniform(0.0, 0.3);
      worst = std::max(worst, (tangent_T_closed_form(xi, s) - tangent_T_quadrature(xi, s))
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    record("tangent operator vs quadrature", worst, 1e-10);
  }
  {
    // planar arc: every section bends about z with the same curvature
    const double kappa = 5.0;
    StrainVector q = reference_strains(n);
    for (int k = 0; k < n; ++k) q(6 * k + 2) = kappa;
    const double L = rod.length;
    const Vector3d exact(std::sin(kappa * L) / kappa, (1.0 - std::cos(kappa * L)) / kappa, 0.0);
    record("constant-curvature arc", (tip_pose(rod, q).position() - exact).norm(), 1e-10);
  }
  {
    double worst = 0.0;
    const double h = 1e-6;
    for (int i = 0; i < 5; ++i) {
      const StrainVector q = rnd.strains(n);
      const double X = rnd.uniform(0.0, rod.length);
      const MatrixXd J = jacobian(rod, q, X);
      const Pose g = fk_pose(rod, q, X);
      for (int c = 0; c < dofs; ++c) {
        StrainVector qp = q, qm = q;
        qp(c) += h;
        qm(c) -= h;
        const Matrix4d dg = (fk_pose(rod, qp, X).matrix() - fk_pose(rod, qm, X).matrix()) / (2 * h);
        const Twist fd = vee6(g.inverse().matrix() * dg);
        worst = std::max(worst, rel((J.col(c) - fd).norm(), std::max(1.0, fd.norm())));
      }
    }
    record("Jacobian vs central differences", worst, 1e-6);
  }
  if (angular(rod.gravity).isZero(0.0)) {
    double worst = 0.0;
    const double h = 1e-6;
    for (int i = 0; i < 5; ++i) {
      const StrainVector q = rnd.strains(n);
      const VectorXd force = gravity_matrix(ws, q) * rod.gravity;
      VectorXd grad(dofs);
      for (int c = 0; c < dofs; ++c) {
        StrainVector qp = q, qm = q;
        qp(c) += h;
        qm(c) -= h;
        grad(c) = (gravity_potential(ws, qp) - gravity_potential(ws, qm)) / (2 * h);
      }
      worst = std::max(worst, rel((force + grad).norm(), force.norm()));
    }
    record("gravity force vs potential gradient", worst, 1e-6);
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const StrainVector q = rnd.strains(n);
      const MatrixXd sweep = gravity_matrix(ws, q);
      const MatrixXd direct = gravity_matrix_direct(ws, q, Exec::serial);
      worst = std::max(worst, rel((sweep - direct).norm(), direct.norm()));
    }
    record("gravity sweep vs direct quadrature", worst, 1e-12);
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const StrainVector q = rnd.strains(n);
      const VectorXd u = VectorXd::Random(dofs);
      const VectorXd F = solve_wrench_from_u(rod, q, u);
      worst = std::max(worst, rel((stacked_jacobian(rod, q).transpose() * F - u).norm(), u.norm()));
    }
    record("stacked Jacobian wrench solve", worst, 1e-9);
  }
  {
    // strain law: the closed-loop rate is exactly -Kbar e + qbar_d'
    double worst = 0.0;
    const StrainGains gains = StrainGains::scalar(dofs, 2.0);
    for (int i = 0; i < 5; ++i) {
      const VectorXd qbar = rnd.strains(n) - ws.q_star();
      const VectorXd qbar_d = rnd.strains(n) - ws.q_star();
      const VectorXd qd_dot = 0.1 * VectorXd::Random(dofs);
      const auto cmd = strain_control(ws, qbar, qbar_d, qd_dot, gains);
      const VectorXd rate = strain_rhs_distributed(ws, qbar, cmd.Fbar);
      const VectorXd expected = -2.0 * (qbar - qbar_d) + qd_dot;
      worst = std::max(worst, rel((rate - expected).norm(), expected.norm()));
    }
    record("strain law closed-loop rate", worst, 1e-8);
  }
  {
    double worst = 0.0;
    const TaskGains gains = TaskGains::scalar(2.0);
    for (int i = 0; i < 5; ++i) {
      const VectorXd qbar = rnd.strains(n) - ws.q_star();
      const Pose tip = tip_pose(rod, qbar + ws.q_star());
      const auto tc = task_coordinates(tip, std::nullopt);
      const Vector3d x_d = tip.position() + Vector3d(0.01, -0.02, 0.015);
      const auto cmd = task_control(ws, qbar, tc, x_d, Vector3d(0.0, 0.03, 0.0), gains);
      worst = std::max(worst, (cmd.PB * cmd.wrench - cmd.demand).norm());
    }
    record("task law pseudoinverse residual", worst, 1e-9);
  }
  {
    // d/dt exp(r(t)) = exp(r) hat(W(r) r'), checked by central differences
    double worst = 0.0;
    const double h = 1e-6;
    for (int i = 0; i < 10; ++i) {
      const Vector3d r = rnd.twist(1.5, 0.0).head<3>();
      const Vector3d rdot = rnd.twist(1.0, 0.0).head<3>();
      const Matrix3d dR = (exp_so3(r + h * rdot) - exp_so3(r - h * rdot)) / (2 * h);
      const Vector3d omega = vee3(exp_so3(r).transpose() * dR);
      worst = std::max(worst, (omega - W_map(r) * rdot).norm());
    }
    record("W(r) vs differentiated exponential", worst, 1e-8);
  }
  return out;
}

}  // namespace pcs
