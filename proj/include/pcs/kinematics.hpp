#pragma once

#include <vector>

#include "pcs/liegroup.hpp"
#include "pcs/rod.hpp"

namespace pcs {

struct ShapeSample {
  double X;  // arc length, m
  Pose pose;
};

/// Per-call cache of the section exponentials of a strain vector.
struct SectionChain {
  std::vector<double> lengths;     // l_k
  std::vector<double> boundaries;  // L_0 .. L_n
  std::vector<Twist> strains;      // xi_k
  std::vector<Pose> exps;          // exp_se3(xi_k, l_k)
  std::vector<Pose> poses;         // g(L_0) .. g(L_n)
  std::vector<Matrix6d> tangents;  // tangent_T(xi_k, l_k)

  SectionChain(const RodSpec& spec, const StrainVector& q);

  int size() const { return static_cast<int>(strains.size()); }
  // Section containing X; a boundary X = L_i belongs to section i (proximal).
  int section_of(double X) const;
};

Pose fk_pose(const RodSpec& spec, const StrainVector& q, double X);
Pose tip_pose(const RodSpec& spec, const StrainVector& q);

// n * samples_per_section + 1 samples; neighbouring sections share their
// boundary sample.
std::vector<ShapeSample> fk_shape(const RodSpec& spec, const StrainVector& q,
                                  int samples_per_section);

/// Geometric (body) Jacobian J(X, q) in R^{6 x 6n}: eta(X) = J qdot.
MatrixXd jacobian(const RodSpec& spec, const StrainVector& q, double X);
MatrixXd jacobian(const SectionChain& chain, double X);

Twist body_velocity(const RodSpec& spec, const StrainVector& q, const VectorXd& qdot,
                    double X);

}  // namespace pcs
