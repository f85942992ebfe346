#pragma once

#include "pcs/kinematics.hpp"
#include "pcs/parallel.hpp"
#include "pcs/quadrature.hpp"
#include "pcs/rod.hpp"

namespace pcs {

/// Everything about the quasi-static model that does not depend on q:
///   D qdot + K (q - q*) = Jbar^T Fbar + N(q) G,   A = -D^-1 K.
class StaticsWorkspace {
 public:
  explicit StaticsWorkspace(RodSpec spec, int quadrature_nodes = 5);

  const RodSpec& rod() const { return spec_; }
  int dofs() const { return spec_.dofs(); }
  int sections() const { return spec_.num_sections; }

  // Diagonals of the 6n x 6n generalized matrices.
  const VectorXd& K() const { return K_; }
  const VectorXd& D() const { return D_; }
  const VectorXd& D_inv() const { return D_inv_; }
  const VectorXd& A() const { return A_; }
  const StrainVector& q_star() const { return q_star_; }
  const Matrix6d& screw_inertia() const { return mass_; }
  const GaussLegendre& rule() const { return rule_; }

 private:
  RodSpec spec_;
  VectorXd K_, D_, D_inv_, A_;
  StrainVector q_star_;
  Matrix6d mass_;
  GaussLegendre rule_;
};

/// Generalized gravity matrix N(q) = int_0^L J(X,q)^T M Ad(g(X))^-1 dX
/// (6n x 6), Gauss-Legendre per section. Single backward sweep, O(n).
MatrixXd gravity_matrix(const StaticsWorkspace& ws, const SectionChain& chain);
MatrixXd gravity_matrix(const StaticsWorkspace& ws, const StrainVector& q);
MatrixXd gravity_matrix(const RodSpec& spec, const StrainVector& q);

/// Same integral evaluated straight from its definition: one full Jacobian
/// per quadrature node, O(n^2) per node. The per-node loop is the parallel
/// kernel; contributions are summed in node order so both policies agree
/// bitwise.
MatrixXd gravity_matrix_direct(const StaticsWorkspace& ws, const StrainVector& q,
                               Exec exec = Exec::serial);

// N(q) G for the workspace's gravity twist.
VectorXd gravity_force(const StaticsWorkspace& ws, const SectionChain& chain);

/// Jbar(q): row block i is J(L_i, q). Block lower triangular.
MatrixXd stacked_jacobian(const SectionChain& chain);
MatrixXd stacked_jacobian(const RodSpec& spec, const StrainVector& q);

/// qbar' = A qbar + D^-1 (Jbar^T Fbar + N G), q = qbar + q*.
VectorXd strain_rhs_distributed(const StaticsWorkspace& ws, const VectorXd& qbar,
                                const VectorXd& Fbar);
/// Tip-wrench actuation: Fbar is zero except the last block.
VectorXd strain_rhs_tip(const StaticsWorkspace& ws, const VectorXd& qbar,
                        const Wrench& F_tip);
// Overloads for callers that already hold the chain at q = qbar + q*.
VectorXd strain_rhs_distributed(const StaticsWorkspace& ws, const SectionChain& chain,
                                const VectorXd& qbar, const VectorXd& Fbar);
VectorXd strain_rhs_tip(const StaticsWorkspace& ws, const SectionChain& chain,
                        const VectorXd& qbar, const Wrench& F_tip);

/// Fbar with Jbar(q)^T Fbar = u, by partial-pivot LU.
/// Throws SingularJacobian when the condition estimate exceeds 1e12.
VectorXd solve_wrench_from_u(const SectionChain& chain, const VectorXd& u);
VectorXd solve_wrench_from_u(const RodSpec& spec, const StrainVector& q, const VectorXd& u);

inline constexpr double kMaxJacobianCondition = 1e12;

}  // namespace pcs
