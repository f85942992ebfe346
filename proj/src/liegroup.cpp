#include "pcs/liegroup.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pcs/errors.hpp"
#include "pcs/quadrature.hpp"

namespace pcs {

namespace detail {

double sinc(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
  }
  return std::sin(x) / x;
}

double cosc(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 0.5 - x2 / 24.0 * (1.0 - x2 / 30.0 * (1.0 - x2 / 56.0 * (1.0 - x2 / 90.0)));
  }
  const double h = std::sin(0.5 * x);
  return 2.0 * h * h / (x * x);
}

double sinc3(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 / 6.0 - x2 / 120.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0)));
  }
  return (x - std::sin(x)) / (x * x * x);
}

double log_coeff(double x) {
  const double x2 = x * x;
  if (std::abs(x) < kSeriesThreshold) {
    return 1.0 / 12.0 + x2 / 720.0 + x2 * x2 / 30240.0 + x2 * x2 * x2 / 1209600.0 +
           x2 * x2 * x2 * x2 / 47900160.0;
  }
  // (x/2) cot(x/2) = x (1 + cos x) / (2 sin x)
  return (1.0 - 0.5 * x / std::tan(0.5 * x)) / x2;
}

double half_over_sinc(double x) { return 0.5 / sinc(x); }

}  // namespace detail

namespace {

// Coefficients of T(xi, s) = s (I + c1 M + c2 M^2 + c3 M^3 + c4 M^4) with
// M = s ad(xi) and x = s |K|.
struct TangentCoefficients {
  double c1, c2, c3, c4;
};

TangentCoefficients tangent_coefficients(double x) {
  const double x2 = x * x;
  if (std::abs(x) < kSeriesThreshold) {
    const double x4 = x2 * x2;
    const double x6 = x4 * x2;
    const double x8 = x4 * x4;
    return {
        -0.5 + x4 / 720.0 - x6 / 20160.0 + x8 / 1209600.0,
        1.0 / 6.0 - x4 / 5040.0 + x6 / 181440.0 - x8 / 13305600.0,
        -1.0 / 24.0 + x2 / 360.0 - x4 / 13440.0 + x6 / 907200.0 - x8 / 95800320.0,
        1.0 / 120.0 - x2 / 2520.0 + x4 / 120960.0 - x6 / 9979200.0 + x8 / 1245404160.0,
    };
  }
  const double sn = std::sin(x);
  const double cs = std::cos(x);
  const double x3 = x2 * x;
  return {
      -(4.0 - 4.0 * cs - x * sn) / (2.0 * x2),
      (4.0 * x - 5.0 * sn + x * cs) / (2.0 * x3),
      -(2.0 - 2.0 * cs - x * sn) / (2.0 * x2 * x2),
      (2.0 * x - 3.0 * sn + x * cs) / (2.0 * x3 * x2),
  };
}

double rotation_error(const Matrix3d& r) {
  return (r.transpose() * r - Matrix3d::Identity()).norm();
}

}  // namespace

Pose::Pose(const Matrix3d& rotation, const Vector3d& position)
    : rotation_(rotation), position_(position) {
  constexpr double tol = 1e-9;
  if (!rotation.allFinite() || !position.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "pose has non-finite entries");
  }
  if (rotation_error(rotation) > tol || std::abs(rotation.determinant() - 1.0) > tol) {
    std::ostringstream msg;
    msg << "pose rotation is not in SO(3) (|R^T R - I| = " << rotation_error(rotation)
        << ", det = " << rotation.determinant() << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

Pose Pose::from_matrix(const Matrix4d& m) {
  return Pose(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

Pose Pose::unchecked(const Matrix3d& rotation, const Vector3d& position) {
  Pose g;
  g.rotation_ = rotation;
  g.position_ = position;
  return g;
}

Matrix4d Pose::matrix() const {
  Matrix4d m = Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = position_;
  return m;
}

Pose Pose::inverse() const {
  const Matrix3d rt = rotation_.transpose();
  return unchecked(rt, -rt * position_);
}

Pose Pose::operator*(const Pose& rhs) const {
  return unchecked(rotation_ * rhs.rotation_, rotation_ * rhs.position_ + position_);
}

Matrix3d hat3(const Vector3d& v) {
  Matrix3d m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vector3d vee3(const Matrix3d& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

Matrix4d hat6(const Twist& xi) {
  Matrix4d m = Matrix4d::Zero();
  m.topLeftCorner<3, 3>() = hat3(angular(xi));
  m.topRightCorner<3, 1>() = linear(xi);
  return m;
}

Twist vee6(const Matrix4d& m) {
  return stack(vee3(m.topLeftCorner<3, 3>()), m.topRightCorner<3, 1>());
}

Matrix3d exp_so3(const Vector3d& r) {
  const double theta = r.norm();
  const Matrix3d w = hat3(r);
  return Matrix3d::Identity() + detail::sinc(theta) * w + detail::cosc(theta) * w * w;
}

Vector3d log_so3(const Matrix3d& rotation) {
  const Vector3d axis2s = vee3(rotation - rotation.transpose());  // 2 sin(theta) a
  const double c = 0.5 * (rotation.trace() - 1.0);
  const double theta = std::atan2(0.5 * axis2s.norm(), c);
  if (theta > std::numbers::pi - kPiMargin) {
    std::ostringstream msg;
    msg << "rotation angle " << theta << " is within " << kPiMargin
        << " of pi; logarithm branch is ambiguous";
    throw Error(ErrorCode::RotationNearPi, msg.str());
  }
  return detail::half_over_sinc(theta) * axis2s;
}

Pose exp_se3(const Twist& xi, double s) {
  if (!(s >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "exp_se3 requires s >= 0");
  }
  const Vector3d w = s * angular(xi);
  const Vector3d v = s * linear(xi);
  const double theta = w.norm();
  const Matrix3d wh = hat3(w);
  const Matrix3d wh2 = wh * wh;
  const double b = detail::cosc(theta);
  const Matrix3d rot = Matrix3d::Identity() + detail::sinc(theta) * wh + b * wh2;
  const Matrix3d left_jac = Matrix3d::Identity() + b * wh + detail::sinc3(theta) * wh2;
  return Pose::unchecked(rot, left_jac * v);
}

Twist log_se3(const Pose& g) {
  const Vector3d w = log_so3(g.rotation());
  const Matrix3d wh = hat3(w);
  const Matrix3d inv_left_jac =
      Matrix3d::Identity() - 0.5 * wh + detail::log_coeff(w.norm()) * wh * wh;
  return stack(w, inv_left_jac * g.position());
}

Matrix6d Ad(const Pose& g) {
  const Matrix3d& r = g.rotation();
  Matrix6d m = Matrix6d::Zero();
  m.topLeftCorner<3, 3>() = r;
  m.bottomRightCorner<3, 3>() = r;
  m.bottomLeftCorner<3, 3>() = hat3(g.position()) * r;
  return m;
}

Matrix6d Ad_inv(const Pose& g) {
  const Matrix3d rt = g.rotation().transpose();
  Matrix6d m = Matrix6d::Zero();
  m.topLeftCorner<3, 3>() = rt;
  m.bottomRightCorner<3, 3>() = rt;
  m.bottomLeftCorner<3, 3>() = -rt * hat3(g.position());
  return m;
}

Matrix6d ad(const Twist& xi) {
  const Matrix3d k = hat3(angular(xi));
  Matrix6d m = Matrix6d::Zero();
  m.topLeftCorner<3, 3>() = k;
  m.bottomRightCorner<3, 3>() = k;
  m.bottomLeftCorner<3, 3>() = hat3(linear(xi));
  return m;
}

Matrix6d tangent_T_closed_form(const Twist& xi, double s) {
  if (!(s >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tangent_T requires s >= 0");
  }
  const Matrix6d m1 = s * ad(xi);
  const Matrix6d m2 = m1 * m1;
  const Matrix6d m3 = m2 * m1;
  const Matrix6d m4 = m2 * m2;
  const auto c = tangent_coefficients(s * angular(xi).norm());
  return s * (Matrix6d::Identity() + c.c1 * m1 + c.c2 * m2 + c.c3 * m3 + c.c4 * m4);
}

Matrix6d tangent_T_quadrature(const Twist& xi, double s, int nodes) {
  if (!(s >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tangent_T requires s >= 0");
  }
  const GaussLegendre rule(nodes);
  Matrix6d acc = Matrix6d::Zero();
  for (int i = 0; i < rule.order(); ++i) {
    acc += rule.weight(i, 0.0, s) * Ad_inv(exp_se3(xi, rule.node(i, 0.0, s)));
  }
  return acc;
}

Matrix6d tangent_T(const Twist& xi, double s) {
#ifdef PCS_TANGENT_QUADRATURE
  return tangent_T_quadrature(xi, s);
#else
  return tangent_T_closed_form(xi, s);
#endif
}

namespace {
void check_W_domain(double norm) {
  if (norm >= 2.0 * std::numbers::pi - 1e-6) {
    std::ostringstream msg;
    msg << "|r| = " << norm << " is within 1e-6 of 2 pi where W(r) is singular";
    throw Error(ErrorCode::NearSingular, msg.str());
  }
}
}  // namespace

Matrix3d W_map(const Vector3d& r) {
  const double n = r.norm();
  check_W_domain(n);
  const Matrix3d rh = hat3(r);
  return Matrix3d::Identity() - detail::cosc(n) * rh + detail::sinc3(n) * rh * rh;
}

Matrix3d W_inverse(const Vector3d& r) {
  const double n = r.norm();
  check_W_domain(n);
  const Matrix3d rh = hat3(r);
  return Matrix3d::Identity() + 0.5 * rh + detail::log_coeff(n) * rh * rh;
}

}  // namespace pcs
