#ifndef HOMOG_MATERIALS_HPP
#define HOMOG_MATERIALS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "homog/grid.hpp"

namespace homog {

/**
 * Per-phase constitutive parameters. E = 0 encodes vacuum. All 2D laws
 * are plane strain; lambda and mu are derived from (E, nu) with the 3D
 * conversion. Eigenstrain is honored by the damage law only.
 */
struct PhaseParams {
  double youngs_modulus{1.0};
  double poisson_ratio{0.0};
  bool has_damage{false};
  double damage_onset{0.0};      // eps_u, strain norm at which softening starts
  double softening_slope{1.0};   // alpha, secant drops to zero at eps_u (1 + 1/alpha)
  Eigen::Matrix2d eigenstrain{Eigen::Matrix2d::Zero()};

  double lambda() const {
    return youngs_modulus * poisson_ratio /
           ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  }
  double mu() const { return youngs_modulus / (2.0 * (1.0 + poisson_ratio)); }
  bool is_vacuum() const { return youngs_modulus == 0.0; }
};

/// Per-voxel phase assignment plus the phase parameter table.
struct PhaseMap {
  int nx{0};
  int ny{0};
  std::vector<int> phase;          // row-major, nx * ny
  std::vector<PhaseParams> params;

  int phase_at(int I, int J) const { return phase[static_cast<std::size_t>(I) * ny + J]; }
  const PhaseParams& params_at(int I, int J) const {
    return params[static_cast<std::size_t>(phase_at(I, J))];
  }

  static PhaseMap uniform(const Grid& grid, const PhaseParams& p) {
    PhaseMap map;
    map.nx = grid.nx;
    map.ny = grid.ny;
    map.phase.assign(static_cast<std::size_t>(grid.npts()), 0);
    map.params = {p};
    return map;
  }

  void validate(const Grid& grid) const;
};

/// Fourth-order tangent flattened over (i*2+j, k*2+l) index pairs.
using Tangent = Eigen::Matrix4d;

struct StressTangent {
  Eigen::Matrix2d stress;
  Tangent tangent;
};

/// Plane-strain isotropic stiffness C_{ijkl} = lambda d_ij d_kl + mu (d_ik d_jl + d_il d_jk).
Tangent isotropic_stiffness(double lambda, double mu);

/**
 * Saint Venant-Kirchhoff law: S = lambda tr(E) 1 + 2 mu E with
 * E = (F^T F - 1)/2 and P = F S, plus the consistent tangent dP/dF.
 * Vacuum returns zero for any F; otherwise det F <= 0 raises.
 */
StressTangent finite_strain_stress(const Eigen::Matrix2d& F, const PhaseParams& p);

/// Linear elasticity, sigma = lambda tr(e) 1 + 2 mu e; the tangent is constant.
StressTangent small_strain_stress(const Eigen::Matrix2d& e, const PhaseParams& p);

enum class DamageStage { elastic, softening, failed };

/// Per-evaluation-point damage history; kappa never decreases, failed is absorbing.
struct DamageState {
  double kappa{0.0};
  DamageStage stage{DamageStage::elastic};
};

struct DamageResult {
  Eigen::Matrix2d stress;
  Tangent secant;
  DamageState state;
};

/**
 * Bilinear isotropic damage law driven by the L2-norm of the effective
 * strain e - eigenstrain. Elastic up to damage_onset; the secant
 * stiffness then interpolates linearly to zero stress at
 * damage_onset * (1 + 1/alpha); beyond that the point is failed and
 * carries no stress. Unloading follows the secant through the origin.
 */
DamageResult damage_stress(const Eigen::Matrix2d& e, const Eigen::Matrix2d& eigenstrain,
                           const DamageState& state, const PhaseParams& p);

/// Secant stiffness reduction factor in [0, 1] for history variable kappa.
double damage_factor(double kappa, const PhaseParams& p);

}  // namespace homog

#endif
