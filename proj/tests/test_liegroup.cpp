#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "pcs/errors.hpp"
#include "test_util.hpp"

using namespace pcs;
using pcs::testing::max_abs;
using pcs::testing::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

// Reference SE(3) exponential: dense matrix exponential of s * hat6(xi).
Matrix4d expm_se3(const Twist& xi, double s) { return (s * hat6(xi)).exp(); }

}  // namespace

TEST(Hat, ZeroAndBasis) {
  EXPECT_EQ(max_abs(hat3(Vector3d::Zero())), 0.0);
  const Matrix3d e1 = hat3(Vector3d::UnitX());
  EXPECT_TRUE((e1 * Vector3d::UnitY()).isApprox(Vector3d::UnitZ()));
}

TEST(Hat, MatchesComponentwiseCross) {
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const Vector3d v = rng.vec3(2.0), w = rng.vec3(2.0);
    const Vector3d cross(v.y() * w.z() - v.z() * w.y(), v.z() * w.x() - v.x() * w.z(),
                         v.x() * w.y() - v.y() * w.x());
    EXPECT_LT((hat3(v) * w - cross).norm(), 1e-14);
    EXPECT_TRUE(vee3(hat3(v)).isApprox(v));
  }
}

TEST(Hat6, ReferenceStrainAndInverse) {
  EXPECT_EQ(max_abs(hat6(Twist::Zero())), 0.0);
  Matrix4d expected = Matrix4d::Zero();
  expected(0, 3) = 1.0;
  EXPECT_EQ(hat6(reference_strain()), expected);
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const Twist xi = rng.twist(3.0, 3.0);
    EXPECT_EQ(vee6(hat6(xi)), xi);
  }
}

TEST(Pose, RejectsNonRotation) {
  Matrix3d bad = Matrix3d::Identity();
  bad(0, 1) = 1e-6;
  EXPECT_THROW(Pose(bad, Vector3d::Zero()), Error);
  Matrix3d reflect = Matrix3d::Identity();
  reflect(2, 2) = -1.0;
  EXPECT_THROW(Pose(reflect, Vector3d::Zero()), Error);
}

TEST(Pose, InverseAndProduct) {
  Rng rng(3);
  const Pose a = rng.pose(), b = rng.pose();
  EXPECT_LT(max_abs((a * a.inverse()).matrix() - Matrix4d::Identity()), 1e-14);
  EXPECT_LT(max_abs((a * b).matrix() - a.matrix() * b.matrix()), 1e-14);
}

TEST(ExpSE3, ZeroArcLengthIsIdentity) {
  Rng rng(4);
  EXPECT_EQ(exp_se3(rng.twist(2.0, 1.0), 0.0).matrix(), Matrix4d::Identity());
}

TEST(ExpSE3, PureTranslation) {
  const Pose g = exp_se3(reference_strain(), 0.37);
  EXPECT_EQ(g.rotation(), Matrix3d::Identity());
  EXPECT_LT((g.position() - Vector3d(0.37, 0, 0)).norm(), 1e-15);
}

TEST(ExpSE3, ConstantCurvatureArc) {
  for (double kappa : {1e-9, 1e-3, 0.5, 5.0, 20.0}) {
    const double s = 0.3;
    const Twist xi = (Twist() << 0, 0, kappa, 1, 0, 0).finished();
    const Pose g = exp_se3(xi, s);
    const Matrix3d Rz = Eigen::AngleAxisd(kappa * s, Vector3d::UnitZ()).toRotationMatrix();
    // 1 - cos written without cancellation so the tiny-kappa oracle stays exact
    const double half = std::sin(kappa * s / 2);
    const Vector3d p(std::sin(kappa * s) / kappa, 2 * half * half / kappa, 0.0);
    EXPECT_LT(max_abs(g.rotation() - Rz), 1e-12) << kappa;
    EXPECT_LT((g.position() - p).norm(), 1e-12) << kappa;
    EXPECT_LT(max_abs(g.matrix() - expm_se3(xi, s)), 1e-12) << kappa;
  }
}

TEST(ExpSE3, MatchesMatrixExponential) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Twist xi = rng.twist(4.0, 2.0);
    const double s = rng.uniform(0.0, 1.0);
    EXPECT_LT(max_abs(exp_se3(xi, s).matrix() - expm_se3(xi, s)), 1e-12);
  }
  // small angles take the series branches
  for (double a : {1e-12, 1e-7, 1e-3, 0.05, 0.0999, 0.1001}) {
    const Twist xi = (Twist() << a, -0.5 * a, 0.3 * a, 1.0, 0.2, -0.1).finished();
    EXPECT_LT(max_abs(exp_se3(xi, 1.0).matrix() - expm_se3(xi, 1.0)), 1e-15) << a;
  }
}

TEST(ExpSE3, RejectsNegativeArcLength) {
  EXPECT_THROW(exp_se3(reference_strain(), -1e-3), Error);
}

TEST(LogSE3, IdentityAndTranslation) {
  EXPECT_EQ(log_se3(Pose::identity()), Twist::Zero());
  const Vector3d p(0.1, -0.2, 0.3);
  const Twist xi = log_se3(Pose(Matrix3d::Identity(), p));
  EXPECT_LT((xi - stack(Vector3d::Zero(), p)).norm(), 1e-15);
}

TEST(LogSE3, Roundtrip) {
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    Twist xi = rng.twist(1.0, 2.0);
    // angular norm up to 3 (< pi)
    xi.head<3>() *= rng.uniform(0.0, 3.0) / std::max(xi.head<3>().norm(), 1e-12);
    EXPECT_LT((log_se3(exp_se3(xi, 1.0)) - xi).norm(), 1e-10);
  }
  for (double a : {1e-10, 1e-6, 0.0999, 0.1, 0.1001, 1.0}) {
    const Twist xi = (Twist() << 0.0, a, 0.0, 1.0, 0.5, 0.0).finished();
    EXPECT_LT((log_se3(exp_se3(xi, 1.0)) - xi).norm(), 1e-13) << a;
  }
}

TEST(LogSO3, RejectsAngleNearPi) {
  const Matrix3d R = exp_so3(Vector3d(0, 0, kPi - 1e-8));
  try {
    log_so3(R);
    FAIL() << "expected RotationNearPi";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RotationNearPi);
  }
}

TEST(Adjoint, IdentityHomomorphismInverse) {
  EXPECT_EQ(Ad(Pose::identity()), Matrix6d::Identity());
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Pose a = rng.pose(), b = rng.pose();
    EXPECT_LT(max_abs(Ad(a * b) - Ad(a) * Ad(b)), 1e-12);
    EXPECT_LT(max_abs(Ad(a).inverse() - Ad(a.inverse())), 1e-12);
    EXPECT_LT(max_abs(Ad_inv(a) - Ad(a.inverse())), 1e-14);
  }
}

TEST(Adjoint, TransformsTwistsLikeConjugation) {
  // hat6(Ad(g) xi) = g hat6(xi) g^-1
  Rng rng(8);
  const Pose g = rng.pose();
  const Twist xi = rng.twist(1.0, 1.0);
  const Matrix4d lhs = hat6(Ad(g) * xi);
  const Matrix4d rhs = g.matrix() * hat6(xi) * g.inverse().matrix();
  EXPECT_LT(max_abs(lhs - rhs), 1e-13);
}

TEST(Adjoint, ExpOfAdIsAdOfExp) {
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const Twist xi = rng.twist(3.0, 2.0);
    const double s = rng.uniform(0.0, 1.0);
    EXPECT_LT(max_abs(Ad(exp_se3(xi, s)) - Matrix6d((s * ad(xi)).exp())), 1e-10);
  }
}

TEST(LittleAdjoint, SelfBracketAndZero) {
  Rng rng(10);
  const Twist xi = rng.twist(3.0, 3.0);
  EXPECT_LT((ad(xi) * xi).norm(), 1e-14);
  EXPECT_EQ(max_abs(ad(Twist::Zero())), 0.0);
}

TEST(LittleAdjoint, DerivativeOfAd) {
  Rng rng(11);
  const Twist xi = rng.twist(2.0, 2.0);
  const double h = 1e-6;
  const Matrix6d fd = (Ad(exp_se3(xi, h)) - Matrix6d::Identity()) / h;
  EXPECT_LT(max_abs(fd - ad(xi)), 1e-5);
  // block structure [[K^, 0], [G^, K^]]
  const Matrix6d m = ad(xi);
  EXPECT_EQ(max_abs(m.topLeftCorner(3, 3) - hat3(angular(xi))), 0.0);
  EXPECT_EQ(max_abs(m.bottomRightCorner(3, 3) - hat3(angular(xi))), 0.0);
  EXPECT_EQ(max_abs(m.bottomLeftCorner(3, 3) - hat3(linear(xi))), 0.0);
  EXPECT_EQ(max_abs(m.topRightCorner<3, 3>()), 0.0);
}

TEST(Tangent, TrivialCases) {
  Rng rng(12);
  EXPECT_EQ(max_abs(tangent_T(rng.twist(2.0, 1.0), 0.0)), 0.0);
  EXPECT_LT(max_abs(tangent_T(Twist::Zero(), 0.7) - 0.7 * Matrix6d::Identity()), 1e-15);
}

TEST(Tangent, ClosedFormMatchesQuadrature) {
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const Twist xi = rng.twist(20.0, 2.0);
    const double s = rng.uniform(0.0, 0.3);
    EXPECT_LT(max_abs(tangent_T_closed_form(xi, s) - tangent_T_quadrature(xi, s)), 1e-10);
  }
  // across the series threshold of x = s |K|
  for (double x : {1e-9, 1e-4, 0.05, 0.0999999, 0.1, 0.1000001, 0.3}) {
    const Twist xi = (Twist() << 0.6 * x, 0.0, 0.8 * x, 1.0, 0.3, -0.2).finished();
    EXPECT_LT(max_abs(tangent_T_closed_form(xi, 1.0) - tangent_T_quadrature(xi, 1.0)), 1e-14)
        << x;
  }
}

TEST(Tangent, BodyVelocityOfPerturbedStrain) {
  // d/dt exp((xi + t d) s) at t = 0, pulled back to the body frame, is T d
  Rng rng(14);
  const double h = 1e-6;
  for (int i = 0; i < 20; ++i) {
    const Twist xi = rng.twist(8.0, 1.5);
    const Twist d = rng.twist(1.0, 1.0);
    const double s = rng.uniform(0.01, 0.3);
    const Pose g = exp_se3(xi, s);
    const Twist fd = pcs::testing::body_difference(g, exp_se3(xi + h * d, s),
                                                   exp_se3(xi - h * d, s), h);
    EXPECT_LT((tangent_T(xi, s) * d - fd).norm(), 1e-7 * std::max(1.0, fd.norm()));
  }
}

TEST(WMap, Basics) {
  EXPECT_EQ(W_map(Vector3d::Zero()), Matrix3d::Identity());
  Rng rng(15);
  for (int i = 0; i < 10; ++i) {
    const Vector3d r = rng.vec3(1.8);
    EXPECT_LT((W_map(r) * r - r).norm(), 1e-14);
    EXPECT_LT(max_abs(W_map(r) * W_inverse(r) - Matrix3d::Identity()), 1e-12);
  }
}

TEST(WMap, QuarterTurnAboutZ) {
  const double a = kPi / 2;
  const Vector3d r(0, 0, a);
  const Matrix3d rh = hat3(r);
  const Matrix3d direct = Matrix3d::Identity() - (1 - std::cos(a)) / (a * a) * rh +
                          (a - std::sin(a)) / (a * a * a) * rh * rh;
  EXPECT_LT(max_abs(W_map(r) - direct), 1e-15);

  // d/dt exp(r + t rdot) = exp(r) hat(W(r) rdot)
  const Vector3d rdot(0.3, -0.7, 0.2);
  const double h = 1e-6;
  const Matrix3d dR = (exp_so3(r + h * rdot) - exp_so3(r - h * rdot)) / (2 * h);
  const Vector3d omega = vee3(exp_so3(r).transpose() * dR);
  EXPECT_LT((omega - W_map(r) * rdot).norm(), 1e-9);
}

TEST(WMap, SingularNearTwoPi) {
  const Vector3d r(0, 2 * kPi - 1e-8, 0);
  EXPECT_THROW(W_map(r), Error);
  EXPECT_THROW(W_inverse(r), Error);
}

TEST(Coefficients, SeriesBranchesAreContinuous) {
  using namespace pcs::detail;
  for (double x : {0.0999999999, 0.1000000001}) {
    EXPECT_NEAR(sinc(x), std::sin(x) / x, 1e-16);
    EXPECT_NEAR(cosc(x), (1 - std::cos(x)) / (x * x), 1e-14);
    EXPECT_NEAR(sinc3(x), (x - std::sin(x)) / (x * x * x), 1e-11);
  }
  EXPECT_DOUBLE_EQ(sinc(0.0), 1.0);
  EXPECT_DOUBLE_EQ(cosc(0.0), 0.5);
  EXPECT_DOUBLE_EQ(sinc3(0.0), 1.0 / 6.0);
}

TEST(Pairing, MomentTimesAngularPlusForceTimesLinear) {
  const Wrench f = (Wrench() << 1, 2, 3, 4, 5, 6).finished();
  const Twist xi = (Twist() << 1, 0, 0, 0, 0, 1).finished();
  EXPECT_DOUBLE_EQ(pairing(f, xi), 1.0 + 6.0);
}
