#ifndef HOMOG_SOLVER_HPP
#define HOMOG_SOLVER_HPP

#include <functional>
#include <vector>

#include "homog/materials.hpp"
#include "homog/projection.hpp"

namespace homog {

/**
 * Prescribed mean deformation. For the finite-strain formulation `mean`
 * is the mean deformation gradient (identity = undeformed); for small
 * strain it is the symmetric mean strain. Damage runs additionally ramp
 * the eigenstrain of flagged phases in n_steps increments up to
 * eigenstrain_amplitude times the phase's unit eigenstrain tensor.
 */
struct LoadCase {
  Formulation formulation{Formulation::finite_strain};
  Eigen::Matrix2d mean{Eigen::Matrix2d::Identity()};
  int n_steps{1};
  double eigenstrain_amplitude{0.0};
};

struct SolverConfig {
  double cg_tol{1e-10};
  int cg_max_iter{20000};
  double newton_tol{1e-8};
  int newton_max_iter{50};
  int max_backtrack{10};

  void validate() const;
};

struct SolveResult {
  bool converged{false};
  int newton_iterations{0};
  int cg_iterations{0};
  TensorField field;   // F (finite strain) or e (small strain)
  TensorField stress;  // P or sigma
  std::vector<double> residual_history;
};

/// G * stress(F); the result is compatible and has zero mean.
TensorField residual(const TensorField& field, const PhaseMap& phases,
                     const ProjectionOperator& op);

/**
 * Newton-Krylov solve of the projected equilibrium G : P(F) = 0 under
 * the prescribed mean deformation. Every Krylov vector stays in the
 * compatible subspace; the mean of F is never touched.
 */
SolveResult solve(const Grid& grid, Scheme scheme, const PhaseMap& phases,
                  const LoadCase& load, const SolverConfig& cfg);

/// Variant reusing a prebuilt operator (formulation must match the load).
SolveResult solve(const ProjectionOperator& op, const PhaseMap& phases,
                  const LoadCase& load, const SolverConfig& cfg);

struct DamageStepResult {
  int step{0};
  bool converged{false};
  int iterations{0};
  int cg_iterations{0};
  double damage_fraction{0.0};   // fraction of evaluation points past the elastic stage
  double failed_fraction{0.0};
};

struct DamageRunResult {
  std::vector<DamageStepResult> steps;
  TensorField strain;
  TensorField stress;
  std::vector<DamageState> state;  // per (voxel, q), committed after the last step
  /// Flat voxel indices that left the elastic stage at the onset step.
  std::vector<int> first_damaged_voxels;
  bool converged{false};

  /// Damage indicator 1 - secant factor, averaged over a voxel's evaluation points.
  std::vector<double> damage_field(const PhaseMap& phases, int nq) const;
};

/**
 * Incremental eigenstrain loading with per-step secant iterations.
 * Damage state is committed only when a step is accepted; the strain
 * field of the previous step warm-starts the next one.
 */
DamageRunResult solve_damage(const Grid& grid, Scheme scheme, const PhaseMap& phases,
                             const LoadCase& load, const SolverConfig& cfg);

}  // namespace homog

#endif
