#include "pcs/kinematics.hpp"

#include <sstream>

#include "pcs/errors.hpp"

namespace pcs {

namespace {

void check_arclength(double X, double length) {
  if (!(X >= 0.0 && X <= length)) {
    std::ostringstream msg;
    msg << "arc length " << X << " outside [0, " << length << "]";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
}

}  // namespace

SectionChain::SectionChain(const RodSpec& spec, const StrainVector& q)
    : lengths(spec.lengths()), boundaries(spec.boundaries()) {
  check_strain_size(spec, q);
  const int n = spec.num_sections;
  strains.reserve(n);
  exps.reserve(n);
  tangents.reserve(n);
  poses.reserve(n + 1);
  poses.push_back(Pose::identity());
  for (int k = 0; k < n; ++k) {
    strains.push_back(q.segment<6>(6 * k));
    exps.push_back(exp_se3(strains.back(), lengths[k]));
    tangents.push_back(tangent_T(strains.back(), lengths[k]));
    poses.push_back(poses.back() * exps.back());
  }
}

int SectionChain::section_of(double X) const {
  const int n = size();
  for (int k = 0; k < n - 1; ++k) {
    if (X <= boundaries[k + 1]) return k;
  }
  return n - 1;
}

Pose fk_pose(const RodSpec& spec, const StrainVector& q, double X) {
  check_arclength(X, spec.length);
  check_strain_size(spec, q);
  const auto b = spec.boundaries();
  const auto l = spec.lengths();
  Pose g;
  for (int k = 0; k < spec.num_sections; ++k) {
    const Twist xi = q.segment<6>(6 * k);
    if (k == spec.num_sections - 1 || X <= b[k + 1]) {
      return g * exp_se3(xi, X - b[k]);
    }
    g = g * exp_se3(xi, l[k]);
  }
  return g;
}

Pose tip_pose(const RodSpec& spec, const StrainVector& q) {
  return fk_pose(spec, q, spec.length);
}

std::vector<ShapeSample> fk_shape(const RodSpec& spec, const StrainVector& q,
                                  int samples_per_section) {
  if (samples_per_section < 1) {
    throw Error(ErrorCode::InvalidArgument, "samples_per_section must be >= 1");
  }
  const SectionChain chain(spec, q);
  std::vector<ShapeSample> out;
  out.reserve(chain.size() * samples_per_section + 1);
  out.push_back({0.0, Pose::identity()});
  for (int k = 0; k < chain.size(); ++k) {
    for (int j = 1; j <= samples_per_section; ++j) {
      if (j == samples_per_section) {
        // reuse the cached boundary pose so the shared sample is exact
        out.push_back({chain.boundaries[k + 1], chain.poses[k + 1]});
        continue;
      }
      const double s = chain.lengths[k] * j / samples_per_section;
      out.push_back({chain.boundaries[k] + s, chain.poses[k] * exp_se3(chain.strains[k], s)});
    }
  }
  return out;
}

MatrixXd jacobian(const SectionChain& chain, double X) {
  check_arclength(X, chain.boundaries.back());
  const int n = chain.size();
  const int m = chain.section_of(X);
  MatrixXd J = MatrixXd::Zero(6, 6 * n);
  // Propagate eta(L_k) = Ad^-1(g_k) (eta(L_{k-1}) + T_k xidot_k) section by
  // section; only the sections proximal to X contribute.
  for (int k = 0; k < m; ++k) {
    if (k > 0) {
      J.leftCols(6 * k) = Ad_inv(chain.exps[k]) * J.leftCols(6 * k);
    }
    J.block<6, 6>(0, 6 * k) = chain.tangents[k];
  }
  const double s = X - chain.boundaries[m];
  const bool at_end = (s == chain.lengths[m]);
  if (m > 0) {
    const Pose g = at_end ? chain.exps[m] : exp_se3(chain.strains[m], s);
    J.leftCols(6 * m) = Ad_inv(g) * J.leftCols(6 * m);
  }
  J.block<6, 6>(0, 6 * m) = at_end ? chain.tangents[m] : tangent_T(chain.strains[m], s);
  return J;
}

MatrixXd jacobian(const RodSpec& spec, const StrainVector& q, double X) {
  check_arclength(X, spec.length);
  return jacobian(SectionChain(spec, q), X);
}

Twist body_velocity(const RodSpec& spec, const StrainVector& q, const VectorXd& qdot,
                    double X) {
  check_strain_size(spec, qdot);
  return jacobian(spec, q, X) * qdot;
}

}  // namespace pcs
