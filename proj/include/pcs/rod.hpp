#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pcs/liegroup.hpp"

namespace pcs {

using VectorXd = Eigen::VectorXd;
using MatrixXd = Eigen::MatrixXd;

/// Concatenated per-section strain twists, q in R^{6n}.
using StrainVector = VectorXd;

/// Geometry and material of a uniform circular cantilever rod.
struct RodSpec {
  double length = 0.3;                  // m
  int num_sections = 1;
  std::vector<double> section_lengths;  // m; empty means uniform split
  double radius = 1e-2;                 // m
  double youngs_modulus = 1e6;          // Pa
  double poisson_ratio = 0.5;
  double density = 1e3;                 // kg/m^3
  double shear_viscosity = 1e2;         // Pa s
  Twist gravity = (Twist() << 0, 0, 0, 0, 0, -9.81).finished();

  // Rod with n equal sections and the material used in the experiments.
  static RodSpec uniform(int n, double length = 0.3);

  // Throws InvalidArgument naming the first violated constraint.
  void validate() const;

  // Resolved section lengths (uniform split when none were given).
  std::vector<double> lengths() const;
  // Cumulative boundaries L_0 = 0, L_1, ..., L_n = L.
  std::vector<double> boundaries() const;
  int dofs() const { return 6 * num_sections; }
};

struct CrossSection {
  double area;       // m^2
  Vector3d inertia;  // (J_x, J_y, J_z), m^4
};

struct SectionMatrices {
  Matrix6d Sigma;    // stiffness
  Matrix6d Upsilon;  // damping
  Matrix6d Mcal;     // screw inertia per unit length
};

struct GeneralizedMatrices {
  VectorXd K;       // diagonal of the 6n x 6n stiffness
  VectorXd D;       // diagonal of the 6n x 6n damping
  StrainVector q_star;

  MatrixXd K_matrix() const { return K.asDiagonal(); }
  MatrixXd D_matrix() const { return D.asDiagonal(); }
};

double shear_modulus(const RodSpec& spec);
CrossSection cross_section(const RodSpec& spec);
SectionMatrices section_matrices(const RodSpec& spec);
GeneralizedMatrices generalized_matrices(const RodSpec& spec);

// q* = [xi0; xi0; ...].
StrainVector reference_strains(int num_sections);

/// Discrete strain energy 1/2 (q - q*)^T K (q - q*).
double potential_energy(const RodSpec& spec, const StrainVector& q);

// Throws InvalidArgument unless q.size() == 6 n.
void check_strain_size(const RodSpec& spec, const VectorXd& q);

}  // namespace pcs
