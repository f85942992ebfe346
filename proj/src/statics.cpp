#include "pcs/statics.hpp"

#include <sstream>
#include <utility>
#include <vector>

#include "pcs/errors.hpp"

namespace pcs {

StaticsWorkspace::StaticsWorkspace(RodSpec spec, int quadrature_nodes)
    : spec_(std::move(spec)), rule_(quadrature_nodes) {
  spec_.validate();
  auto gm = generalized_matrices(spec_);
  K_ = std::move(gm.K);
  D_ = std::move(gm.D);
  q_star_ = std::move(gm.q_star);
  D_inv_ = D_.cwiseInverse();
  A_ = -D_inv_.cwiseProduct(K_);
  mass_ = section_matrices(spec_).Mcal;
}

MatrixXd gravity_matrix(const StaticsWorkspace& ws, const SectionChain& chain) {
  const int n = chain.size();
  const auto& rule = ws.rule();
  const Matrix6d& mass = ws.screw_inertia();

  // own[k]: nodes of section k acting on their own strain block.
  // spatial[k]: sum over nodes of section k of w Ad^-T M Ad^-1, which is
  // what every proximal section sees after transport.
  std::vector<Matrix6d> own(n, Matrix6d::Zero());
  std::vector<Matrix6d> spatial(n, Matrix6d::Zero());
  for (int k = 0; k < n; ++k) {
    const double l = chain.lengths[k];
    for (int j = 0; j < rule.order(); ++j) {
      const double s = rule.node(j, 0.0, l);
      const double w = rule.weight(j, 0.0, l);
      const Matrix6d ad_inv = Ad_inv(chain.poses[k] * exp_se3(chain.strains[k], s));
      const Matrix6d z = mass * ad_inv;
      own[k].noalias() += w * tangent_T(chain.strains[k], s).transpose() * z;
      spatial[k].noalias() += w * ad_inv.transpose() * z;
    }
  }

  MatrixXd N(6 * n, 6);
  Matrix6d tail = Matrix6d::Zero();
  for (int k = n - 1; k >= 0; --k) {
    N.middleRows<6>(6 * k) =
        own[k] + chain.tangents[k].transpose() * Ad(chain.poses[k + 1]).transpose() * tail;
    tail += spatial[k];
  }
  return N;
}

MatrixXd gravity_matrix(const StaticsWorkspace& ws, const StrainVector& q) {
  return gravity_matrix(ws, SectionChain(ws.rod(), q));
}

MatrixXd gravity_matrix(const RodSpec& spec, const StrainVector& q) {
  const StaticsWorkspace ws(spec);
  return gravity_matrix(ws, q);
}

MatrixXd gravity_matrix_direct(const StaticsWorkspace& ws, const StrainVector& q,
                               Exec exec) {
  const SectionChain chain(ws.rod(), q);
  const int n = chain.size();
  const auto& rule = ws.rule();
  const int per_section = rule.order();
  const int total = n * per_section;
  const Matrix6d& mass = ws.screw_inertia();

  std::vector<MatrixXd> contrib(total);
  auto node_term = [&](int idx) {
    const int k = idx / per_section;
    const int j = idx % per_section;
    const double a = chain.boundaries[k];
    const double b = chain.boundaries[k + 1];
    const double X = rule.node(j, a, b);
    const double w = rule.weight(j, a, b);
    const Pose g = chain.poses[k] * exp_se3(chain.strains[k], X - a);
    contrib[idx] = w * jacobian(chain, X).transpose() * (mass * Ad_inv(g));
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int idx = 0; idx < total; ++idx) node_term(idx);
  } else {
    for (int idx = 0; idx < total; ++idx) node_term(idx);
  }

  MatrixXd N = MatrixXd::Zero(6 * n, 6);
  for (const auto& c : contrib) N += c;
  return N;
}

VectorXd gravity_force(const StaticsWorkspace& ws, const SectionChain& chain) {
  return gravity_matrix(ws, chain) * ws.rod().gravity;
}

MatrixXd stacked_jacobian(const SectionChain& chain) {
  const int n = chain.size();
  MatrixXd Jbar = MatrixXd::Zero(6 * n, 6 * n);
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      Jbar.block(6 * i, 0, 6, 6 * i) =
          Ad_inv(chain.exps[i]) * Jbar.block(6 * (i - 1), 0, 6, 6 * i);
    }
    Jbar.block<6, 6>(6 * i, 6 * i) = chain.tangents[i];
  }
  return Jbar;
}

MatrixXd stacked_jacobian(const RodSpec& spec, const StrainVector& q) {
  return stacked_jacobian(SectionChain(spec, q));
}

VectorXd strain_rhs_distributed(const StaticsWorkspace& ws, const SectionChain& chain,
                                const VectorXd& qbar, const VectorXd& Fbar) {
  check_strain_size(ws.rod(), Fbar);
  const VectorXd generalized =
      stacked_jacobian(chain).transpose() * Fbar + gravity_force(ws, chain);
  return ws.A().cwiseProduct(qbar) + ws.D_inv().cwiseProduct(generalized);
}

VectorXd strain_rhs_distributed(const StaticsWorkspace& ws, const VectorXd& qbar,
                                const VectorXd& Fbar) {
  check_strain_size(ws.rod(), qbar);
  return strain_rhs_distributed(ws, SectionChain(ws.rod(), qbar + ws.q_star()), qbar, Fbar);
}

VectorXd strain_rhs_tip(const StaticsWorkspace& ws, const SectionChain& chain,
                        const VectorXd& qbar, const Wrench& F_tip) {
  const VectorXd generalized =
      jacobian(chain, ws.rod().length).transpose() * F_tip + gravity_force(ws, chain);
  return ws.A().cwiseProduct(qbar) + ws.D_inv().cwiseProduct(generalized);
}

VectorXd strain_rhs_tip(const StaticsWorkspace& ws, const VectorXd& qbar,
                        const Wrench& F_tip) {
  check_strain_size(ws.rod(), qbar);
  return strain_rhs_tip(ws, SectionChain(ws.rod(), qbar + ws.q_star()), qbar, F_tip);
}

VectorXd solve_wrench_from_u(const SectionChain& chain, const VectorXd& u) {
  const MatrixXd JbarT = stacked_jacobian(chain).transpose();
  if (u.size() != JbarT.rows()) {
    throw Error(ErrorCode::InvalidArgument, "generalized force has wrong size");
  }
  const Eigen::PartialPivLU<MatrixXd> lu(JbarT);
  const double rcond = lu.rcond();
  if (!(rcond * kMaxJacobianCondition >= 1.0)) {
    std::ostringstream msg;
    msg << "stacked Jacobian condition estimate " << 1.0 / rcond << " exceeds "
        << kMaxJacobianCondition;
    throw Error(ErrorCode::SingularJacobian, msg.str());
  }
  return lu.solve(u);
}

VectorXd solve_wrench_from_u(const RodSpec& spec, const StrainVector& q, const VectorXd& u) {
  return solve_wrench_from_u(SectionChain(spec, q), u);
}

}  // namespace pcs
