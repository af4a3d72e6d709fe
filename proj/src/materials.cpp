#include "homog/materials.hpp"

#include <stdexcept>

namespace homog {

void PhaseMap::validate(const Grid& grid) const {
  if (nx != grid.nx || ny != grid.ny ||
      phase.size() != static_cast<std::size_t>(grid.npts())) {
    throw std::invalid_argument("PhaseMap: shape does not match grid");
  }
  for (int id : phase) {
    if (id < 0 || id >= static_cast<int>(params.size())) {
      throw std::invalid_argument("PhaseMap: voxel references unknown phase id");
    }
  }
  for (const PhaseParams& p : params) {
    if (p.youngs_modulus < 0.0) {
      throw std::invalid_argument("PhaseMap: Young's modulus must be >= 0");
    }
  }
}

Tangent isotropic_stiffness(double lambda, double mu) {
  Tangent c = Tangent::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          c(i * 2 + j, k * 2 + l) = lambda * (i == j) * (k == l) +
                                    mu * ((i == k) * (j == l) + (i == l) * (j == k));
  return c;
}

StressTangent finite_strain_stress(const Eigen::Matrix2d& F, const PhaseParams& p) {
  if (p.is_vacuum()) {
    return {Eigen::Matrix2d::Zero(), Tangent::Zero()};
  }
  if (F.determinant() <= 0.0) {
    throw std::runtime_error("finite_strain_stress: non-invertible deformation (det F <= 0)");
  }
  const double lambda = p.lambda();
  const double mu = p.mu();
  const Eigen::Matrix2d green = 0.5 * (F.transpose() * F - Eigen::Matrix2d::Identity());
  const Eigen::Matrix2d second_pk =
      lambda * green.trace() * Eigen::Matrix2d::Identity() + 2.0 * mu * green;
  StressTangent out;
  out.stress = F * second_pk;
  // K_{ia jb} = d_ij S_ab + F_ig C_gade (dE_de / dF_jb), dE_de/dF_jb = (d_db F_je + d_eb F_jd)/2
  out.tangent = Tangent::Zero();
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int j = 0; j < 2; ++j)
        for (int b = 0; b < 2; ++b) {
          double v = (i == j) ? second_pk(a, b) : 0.0;
          for (int g = 0; g < 2; ++g) {
            // C_gade contracted with the symmetrized F terms
            v += F(i, g) * (lambda * (g == a) * F(j, b) +
                            mu * (F(j, a) * (g == b) + (a == b) * F(j, g)));
          }
          out.tangent(i * 2 + a, j * 2 + b) = v;
        }
  return out;
}

StressTangent small_strain_stress(const Eigen::Matrix2d& e, const PhaseParams& p) {
  if (p.is_vacuum()) {
    return {Eigen::Matrix2d::Zero(), Tangent::Zero()};
  }
  const double lambda = p.lambda();
  const double mu = p.mu();
  StressTangent out;
  out.stress = lambda * e.trace() * Eigen::Matrix2d::Identity() + 2.0 * mu * e;
  out.tangent = isotropic_stiffness(lambda, mu);
  return out;
}

double damage_factor(double kappa, const PhaseParams& p) {
  if (p.softening_slope <= 0.0) {
    throw std::invalid_argument("damage law: softening slope alpha must be > 0");
  }
  const double eps_u = p.damage_onset;
  if (kappa <= eps_u) return 1.0;
  const double eps_f = eps_u * (1.0 + 1.0 / p.softening_slope);
  if (kappa >= eps_f) return 0.0;
  // Bilinear envelope: stress E0 (eps_u - alpha (kappa - eps_u)), secant through origin.
  return (eps_u - p.softening_slope * (kappa - eps_u)) / kappa;
}

DamageResult damage_stress(const Eigen::Matrix2d& e, const Eigen::Matrix2d& eigenstrain,
                           const DamageState& state, const PhaseParams& p) {
  const Eigen::Matrix2d e_eff = e - eigenstrain;
  DamageResult out;
  out.state = state;
  if (!p.has_damage) {
    StressTangent st = small_strain_stress(e_eff, p);
    out.stress = st.stress;
    out.secant = st.tangent;
    return out;
  }
  out.state.kappa = std::max(state.kappa, e_eff.norm());
  const double eps_f = p.damage_onset * (1.0 + 1.0 / p.softening_slope);
  if (state.stage == DamageStage::failed || out.state.kappa >= eps_f) {
    out.state.stage = DamageStage::failed;
    out.stress = Eigen::Matrix2d::Zero();
    out.secant = Tangent::Zero();
    return out;
  }
  out.state.stage = out.state.kappa > p.damage_onset ? DamageStage::softening
                                                     : DamageStage::elastic;
  const double factor = damage_factor(out.state.kappa, p);
  out.secant = factor * isotropic_stiffness(p.lambda(), p.mu());
  out.stress = factor * (p.lambda() * e_eff.trace() * Eigen::Matrix2d::Identity() +
                         2.0 * p.mu() * e_eff);
  return out;
}

}  // namespace homog
