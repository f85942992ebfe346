#include <numbers>

#include "pcs/errors.hpp"
#include "test_util.hpp"

using namespace pcs;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(CrossSection, CircleOfRadiusOneCentimetre) {
  const RodSpec rod = RodSpec::uniform(1);
  const CrossSection cs = cross_section(rod);
  EXPECT_NEAR(cs.area, 3.14159e-4, 1e-9);
  EXPECT_NEAR(cs.inertia.x(), 1.57080e-8, 1e-13);
  EXPECT_NEAR(cs.inertia.y(), 7.85398e-9, 1e-14);
  EXPECT_DOUBLE_EQ(cs.inertia.y(), cs.inertia.z());
  // J = diag(2, 1, 1) A^2 / (4 pi)
  EXPECT_NEAR(cs.inertia.y(), cs.area * cs.area / (4 * kPi), 1e-22);
}

TEST(CrossSection, ScalesWithRadius) {
  RodSpec a = RodSpec::uniform(1), b = a;
  b.radius = 2 * a.radius;
  const auto ca = cross_section(a), cb = cross_section(b);
  EXPECT_NEAR(cb.area / ca.area, 4.0, 1e-12);
  EXPECT_NEAR(cb.inertia.x() / ca.inertia.x(), 16.0, 1e-12);
}

TEST(SectionMatrices, ExperimentMaterial) {
  const RodSpec rod = RodSpec::uniform(1);
  EXPECT_NEAR(shear_modulus(rod), 3.33333e5, 1.0);
  const auto m = section_matrices(rod);
  EXPECT_NEAR(m.Sigma(1, 1), 7.85398e-3, 1e-8);
  EXPECT_NEAR(m.Upsilon(3, 3), 9.42478e-2, 1e-7);

  const auto cs = cross_section(rod);
  const double E = rod.youngs_modulus, G = shear_modulus(rod), v = rod.shear_viscosity;
  const Vector6d sigma(G * cs.inertia.x(), E * cs.inertia.y(), E * cs.inertia.z(),
                       E * cs.area, G * cs.area, G * cs.area);
  const Vector6d upsilon(cs.inertia.x() * v, 3 * cs.inertia.y() * v, 3 * cs.inertia.z() * v,
                         3 * cs.area * v, cs.area * v, cs.area * v);
  const Vector6d mass(cs.inertia.x(), cs.inertia.y(), cs.inertia.z(), cs.area, cs.area,
                      cs.area);
  EXPECT_TRUE(m.Sigma.diagonal().isApprox(sigma, 1e-15));
  EXPECT_TRUE(m.Upsilon.diagonal().isApprox(upsilon, 1e-15));
  EXPECT_TRUE(m.Mcal.diagonal().isApprox(rod.density * mass, 1e-15));
  EXPECT_TRUE(m.Sigma.isDiagonal() && m.Upsilon.isDiagonal() && m.Mcal.isDiagonal());
}

TEST(GeneralizedMatrices, BlocksScaleWithSectionLength) {
  const RodSpec rod = RodSpec::uniform(2);
  const auto sm = section_matrices(rod);
  const auto gm = generalized_matrices(rod);
  ASSERT_EQ(gm.K.size(), 12);
  EXPECT_TRUE(gm.K.head<6>().isApprox(0.15 * sm.Sigma.diagonal(), 1e-15));
  EXPECT_TRUE(gm.K.tail<6>().isApprox(0.15 * sm.Sigma.diagonal(), 1e-15));
  EXPECT_TRUE(gm.D.head<6>().isApprox(0.15 * sm.Upsilon.diagonal(), 1e-15));
  EXPECT_GT(gm.K.minCoeff(), 0.0);
  EXPECT_GT(gm.D.minCoeff(), 0.0);
  const VectorXd A = -gm.D.cwiseInverse().cwiseProduct(gm.K);
  EXPECT_LT(A.maxCoeff(), 0.0);
  EXPECT_EQ(gm.q_star, reference_strains(2));
}

TEST(GeneralizedMatrices, NonUniformSections) {
  RodSpec rod = RodSpec::uniform(3);
  rod.section_lengths = {0.05, 0.1, 0.15};
  const auto sm = section_matrices(rod);
  const auto gm = generalized_matrices(rod);
  EXPECT_TRUE(gm.K.segment<6>(6).isApprox(0.1 * sm.Sigma.diagonal(), 1e-15));
  const auto b = rod.boundaries();
  EXPECT_NEAR(b[1], 0.05, 1e-15);
  EXPECT_NEAR(b[3], 0.3, 1e-15);
}

TEST(RodSpec, Validation) {
  RodSpec ok = RodSpec::uniform(2);
  EXPECT_NO_THROW(ok.validate());
  auto expect_invalid = [](RodSpec r) { EXPECT_THROW(r.validate(), Error); };
  RodSpec r = ok;
  r.radius = 0.0;
  expect_invalid(r);
  r = ok;
  r.poisson_ratio = 0.6;
  expect_invalid(r);
  r = ok;
  r.poisson_ratio = -1.0;
  expect_invalid(r);
  r = ok;
  r.shear_viscosity = -1.0;
  expect_invalid(r);
  r = ok;
  r.num_sections = 0;
  expect_invalid(r);
  r = ok;
  r.section_lengths = {0.1, 0.1};  // sums to 0.2, not 0.3
  expect_invalid(r);
  r = ok;
  r.section_lengths = {0.1, 0.1, 0.1};  // wrong count
  expect_invalid(r);
}

TEST(PotentialEnergy, ReferenceIsZero) {
  const RodSpec rod = RodSpec::uniform(3);
  EXPECT_EQ(potential_energy(rod, reference_strains(3)), 0.0);
}

TEST(PotentialEnergy, SingleSectionBending) {
  const RodSpec rod = RodSpec::uniform(1);
  StrainVector q = reference_strains(1);
  q(1) = 10.0;
  const double EI = rod.youngs_modulus * cross_section(rod).inertia.y();
  EXPECT_NEAR(potential_energy(rod, q), 0.5 * 0.3 * EI * 100.0, 1e-15);
  EXPECT_NEAR(potential_energy(rod, q), 0.11781, 1e-5);
}

TEST(PotentialEnergy, QuadraticFormOfK) {
  pcs::testing::Rng rng(3);
  const RodSpec rod = RodSpec::uniform(4);
  const StrainVector q = rng.strains(4);
  const auto gm = generalized_matrices(rod);
  const VectorXd e = q - gm.q_star;
  EXPECT_NEAR(potential_energy(rod, q), 0.5 * e.dot(gm.K_matrix() * e), 1e-12);
}

TEST(PotentialEnergy, RejectsWrongSize) {
  EXPECT_THROW(potential_energy(RodSpec::uniform(2), reference_strains(3)), Error);
}
