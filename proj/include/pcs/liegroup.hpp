#pragma once

// SO(3)/SE(3) primitives.
//
// Every 6-vector in this library is stored angular part first:
//   strain twist   xi  = [K; Gamma]   (curvatures, stretch/shear)
//   velocity twist eta = [omega; nu]
//   wrench         F   = [m; n]
// and every 6x6 operator (Ad, ad, stiffness, damping) follows that ordering.

#include <Eigen/Dense>

namespace pcs {

using Vector3d = Eigen::Vector3d;
using Matrix3d = Eigen::Matrix3d;
using Matrix4d = Eigen::Matrix4d;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

using Twist = Vector6d;
using Wrench = Vector6d;

// Angular-part threshold below which the trigonometric coefficient
// functions switch to their series expansions.
inline constexpr double kSeriesThreshold = 0.1;

// Rotation angles closer than this to pi are rejected by the logarithms.
inline constexpr double kPiMargin = 1e-6;

inline Vector3d angular(const Vector6d& v) { return v.head<3>(); }
inline Vector3d linear(const Vector6d& v) { return v.tail<3>(); }
inline Vector6d stack(const Vector3d& ang, const Vector3d& lin) {
  Vector6d out;
  out << ang, lin;
  return out;
}

// Reference strain of the undeformed rod: unit stretch along e1.
inline Twist reference_strain() {
  Twist xi0 = Twist::Zero();
  xi0(3) = 1.0;
  return xi0;
}

// Wrench/twist dual pairing.
inline double pairing(const Wrench& f, const Twist& xi) { return f.dot(xi); }

/// Rigid transform (R, x) in SE(3).
class Pose {
 public:
  Pose() : rotation_(Matrix3d::Identity()), position_(Vector3d::Zero()) {}

  // Checks orthogonality and det = +1 to 1e-9; throws InvalidArgument.
  Pose(const Matrix3d& rotation, const Vector3d& position);

  static Pose identity() { return {}; }
  static Pose from_matrix(const Matrix4d& m);
  // Skips the orthogonality check. For values produced by exact group
  // operations where the check would only cost time.
  static Pose unchecked(const Matrix3d& rotation, const Vector3d& position);

  const Matrix3d& rotation() const { return rotation_; }
  const Vector3d& position() const { return position_; }

  Matrix4d matrix() const;
  Pose inverse() const;
  Pose operator*(const Pose& rhs) const;

 private:
  Matrix3d rotation_;
  Vector3d position_;
};

Matrix3d hat3(const Vector3d& v);
Vector3d vee3(const Matrix3d& m);
Matrix4d hat6(const Twist& xi);
Twist vee6(const Matrix4d& m);

Matrix3d exp_so3(const Vector3d& r);
// Principal rotation logarithm; throws RotationNearPi when the angle
// exceeds pi - kPiMargin.
Vector3d log_so3(const Matrix3d& rotation);

/// exp(s * hat6(xi)) in closed form. Requires s >= 0.
Pose exp_se3(const Twist& xi, double s);

/// Principal SE(3) logarithm: exp_se3(log_se3(g), 1) == g.
Twist log_se3(const Pose& g);

Matrix6d Ad(const Pose& g);
// Ad(g)^-1 = Ad(g^-1), formed directly from (R, x).
Matrix6d Ad_inv(const Pose& g);
Matrix6d ad(const Twist& xi);

/// T(xi, s) = integral_0^s Ad(exp_se3(xi, u))^-1 du.
///
/// This is the right-trivialised tangent of the section exponential: for
/// g(t) = exp_se3(xi + t d, s) the body velocity g^-1 g' at t = 0 is T d.
/// Evaluated in closed form through the quartic polynomial of ad(xi),
/// unless the library is built with PCS_TANGENT_QUADRATURE.
Matrix6d tangent_T(const Twist& xi, double s);
Matrix6d tangent_T_closed_form(const Twist& xi, double s);
Matrix6d tangent_T_quadrature(const Twist& xi, double s, int nodes = 64);

/// W(r) = I - (1-cos|r|)/|r|^2 r~ + (|r|-sin|r|)/|r|^3 r~^2, the map from
/// exponential-coordinate rates to body angular velocity.
/// Throws NearSingular for |r| >= 2 pi - 1e-6.
Matrix3d W_map(const Vector3d& r);
Matrix3d W_inverse(const Vector3d& r);

namespace detail {
// Coefficient functions, each with a series branch near zero.
double sinc(double x);          // sin x / x
double cosc(double x);          // (1 - cos x) / x^2
double sinc3(double x);         // (x - sin x) / x^3
double log_coeff(double x);     // (1 - x sin x / (2 (1 - cos x))) / x^2
double half_over_sinc(double x);  // x / (2 sin x)
}  // namespace detail

}  // namespace pcs
