#pragma once

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pcs/kinematics.hpp"
#include "pcs/liegroup.hpp"
#include "pcs/rod.hpp"

namespace pcs::testing {

class Rng {
 public:
  explicit Rng(unsigned seed = 12345) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(gen_); }

  Vector3d vec3(double scale) {
    return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
  }

  Twist twist(double ang, double lin) { return stack(vec3(ang), vec3(lin)); }

  // Rotation of angle < max_angle about a random axis.
  Matrix3d rotation(double max_angle = 3.0) {
    Vector3d axis = vec3(1.0);
    while (axis.norm() < 1e-3) axis = vec3(1.0);
    return exp_so3(axis.normalized() * uniform(0.0, max_angle));
  }

  Pose pose() { return Pose(rotation(), vec3(1.0)); }

  // q* plus bounded random curvature and small stretch/shear.
  StrainVector strains(int n, double ang = 4.0, double lin = 0.2) {
    StrainVector q = reference_strains(n);
    for (int k = 0; k < n; ++k) q.segment<6>(6 * k) += twist(ang, lin);
    return q;
  }

 private:
  std::mt19937 gen_;
};

// Body-frame derivative vee(g^-1 dg) from two poses a central step apart.
inline Twist body_difference(const Pose& g, const Pose& plus, const Pose& minus, double h) {
  const Matrix4d dg = (plus.matrix() - minus.matrix()) / (2.0 * h);
  return vee6(g.inverse().matrix() * dg);
}

inline double max_abs(const MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace pcs::testing
