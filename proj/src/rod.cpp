#include "pcs/rod.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "pcs/errors.hpp"

namespace pcs {

namespace {
void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, "invalid rod: " + what);
}
}  // namespace

RodSpec RodSpec::uniform(int n, double length) {
  RodSpec spec;
  spec.length = length;
  spec.num_sections = n;
  spec.section_lengths.assign(n, length / n);
  return spec;
}

void RodSpec::validate() const {
  require(length > 0.0, "length must be positive");
  require(num_sections >= 1, "num_sections must be >= 1");
  require(radius > 0.0, "radius must be positive");
  require(youngs_modulus > 0.0, "youngs_modulus must be positive");
  require(density > 0.0, "density must be positive");
  require(shear_viscosity > 0.0, "shear_viscosity must be positive");
  require(poisson_ratio > -1.0 && poisson_ratio <= 0.5,
          "poisson_ratio must lie in (-1, 0.5]");
  require(gravity.allFinite(), "gravity must be finite");
  if (!section_lengths.empty()) {
    require(static_cast<int>(section_lengths.size()) == num_sections,
            "section_lengths must have num_sections entries");
    double sum = 0.0;
    for (double l : section_lengths) {
      require(l > 0.0, "section lengths must be positive");
      sum += l;
    }
    std::ostringstream msg;
    msg << "section lengths sum to " << sum << ", expected " << length;
    require(std::abs(sum - length) <= 1e-12 * length, msg.str());
  }
}

std::vector<double> RodSpec::lengths() const {
  if (!section_lengths.empty()) return section_lengths;
  return std::vector<double>(num_sections, length / num_sections);
}

std::vector<double> RodSpec::boundaries() const {
  const auto l = lengths();
  std::vector<double> b(l.size() + 1, 0.0);
  std::partial_sum(l.begin(), l.end(), b.begin() + 1);
  b.back() = length;
  return b;
}

double shear_modulus(const RodSpec& spec) {
  return spec.youngs_modulus / (2.0 * (1.0 + spec.poisson_ratio));
}

CrossSection cross_section(const RodSpec& spec) {
  if (!(spec.radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  }
  const double a = std::numbers::pi * spec.radius * spec.radius;
  const double j = a * a / (4.0 * std::numbers::pi);
  return {a, Vector3d(2.0 * j, j, j)};
}

SectionMatrices section_matrices(const RodSpec& spec) {
  const auto [a, j] = cross_section(spec);
  const double e = spec.youngs_modulus;
  const double g = shear_modulus(spec);
  const double visc = spec.shear_viscosity;
  const double rho = spec.density;

  Vector6d sigma, upsilon, mass;
  sigma << g * j.x(), e * j.y(), e * j.z(), e * a, g * a, g * a;
  upsilon << j.x(), 3.0 * j.y(), 3.0 * j.z(), 3.0 * a, a, a;
  mass << j.x(), j.y(), j.z(), a, a, a;
  return {sigma.asDiagonal(), (visc * upsilon).asDiagonal(), (rho * mass).asDiagonal()};
}

StrainVector reference_strains(int num_sections) {
  StrainVector q(6 * num_sections);
  for (int i = 0; i < num_sections; ++i) q.segment<6>(6 * i) = reference_strain();
  return q;
}

GeneralizedMatrices generalized_matrices(const RodSpec& spec) {
  spec.validate();
  const auto m = section_matrices(spec);
  const auto l = spec.lengths();
  const int n = spec.num_sections;
  GeneralizedMatrices out{VectorXd(6 * n), VectorXd(6 * n), reference_strains(n)};
  for (int i = 0; i < n; ++i) {
    out.K.segment<6>(6 * i) = l[i] * m.Sigma.diagonal();
    out.D.segment<6>(6 * i) = l[i] * m.Upsilon.diagonal();
  }
  return out;
}

void check_strain_size(const RodSpec& spec, const VectorXd& q) {
  if (q.size() != spec.dofs()) {
    std::ostringstream msg;
    msg << "strain vector has " << q.size() << " entries, expected " << spec.dofs();
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

double potential_energy(const RodSpec& spec, const StrainVector& q) {
  check_strain_size(spec, q);
  const auto gm = generalized_matrices(spec);
  const VectorXd dq = q - gm.q_star;
  return 0.5 * dq.dot(gm.K.cwiseProduct(dq));
}

}  // namespace pcs
