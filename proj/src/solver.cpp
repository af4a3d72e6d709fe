#include "homog/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace homog {

namespace {

constexpr double k_tiny = 1e-300;

struct Evaluation {
  TensorField stress;
  std::vector<Tangent> tangents;  // per (voxel, q)
};

Evaluation evaluate(const TensorField& field, const PhaseMap& phases,
                    Formulation form) {
  Evaluation out{TensorField{field.nx(), field.ny(), field.nq()},
                 std::vector<Tangent>(static_cast<std::size_t>(field.nx()) *
                                      field.ny() * field.nq())};
  for (int I = 0; I < field.nx(); ++I) {
    for (int J = 0; J < field.ny(); ++J) {
      const PhaseParams& p = phases.params_at(I, J);
      for (int q = 0; q < field.nq(); ++q) {
        StressTangent st;
        try {
          st = form == Formulation::finite_strain
                   ? finite_strain_stress(field.tensor_at(I, J, q), p)
                   : small_strain_stress(field.tensor_at(I, J, q), p);
        } catch (const std::exception& err) {
          std::ostringstream msg;
          msg << "material evaluation failed at voxel (" << I << ", " << J
              << "), evaluation point " << q << ": " << err.what();
          throw std::runtime_error(msg.str());
        }
        out.stress.set_tensor(I, J, q, st.stress);
        out.tangents[(static_cast<std::size_t>(I) * field.ny() + J) * field.nq() + q] =
            st.tangent;
      }
    }
  }
  return out;
}

void apply_tangent_into(const std::vector<Tangent>& tangents, const TensorField& x,
                        TensorField& y) {
  const Complex* px = x.data();
  Complex* py = y.data();
  const std::size_t npoints = tangents.size();
  for (std::size_t p = 0; p < npoints; ++p) {
    Eigen::Vector4d v;
    for (int c = 0; c < 4; ++c) v[c] = px[p * 4 + c].real();
    const Eigen::Vector4d w = tangents[p] * v;
    for (int c = 0; c < 4; ++c) py[p * 4 + c] = w[c];
  }
}

using LinearOp = std::function<void(const TensorField&, TensorField&)>;

/// Plain conjugate gradients; returns iterations taken, -1 on stagnation.
/// A nonzero x is taken as the initial guess.
int conjugate_gradients(const LinearOp& apply, const TensorField& b,
                        TensorField& x, double tol, int max_iter) {
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    scale(0.0, x);
    return 0;
  }
  TensorField r = b;
  TensorField ap = b;  // scratch, overwritten by every operator application
  if (x.norm() > 0.0) {
    apply(x, ap);
    axpy(-1.0, ap, r);
  }
  TensorField p = r;
  double rr = dot(r, r);
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::sqrt(rr) <= tol * b_norm) return iter;
    apply(p, ap);
    const double pap = dot(p, ap);
    if (pap <= 0.0) {
      // Semi-definite operator: a zero-curvature direction ends the iteration.
      return std::sqrt(rr) <= std::sqrt(tol) * b_norm ? iter : -1;
    }
    const double alpha = rr / pap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    scale(beta, p);
    axpy(1.0, r, p);
  }
  return std::sqrt(rr) <= tol * b_norm ? max_iter : -1;
}

}  // namespace

void SolverConfig::validate() const {
  if (cg_tol <= 0.0 || cg_tol >= 1.0 || newton_tol <= 0.0 || newton_tol >= 1.0) {
    throw std::invalid_argument("SolverConfig: tolerances must lie in (0, 1)");
  }
}

TensorField residual(const TensorField& field, const PhaseMap& phases,
                     const ProjectionOperator& op) {
  Evaluation eval = evaluate(field, phases, op.formulation());
  return op.apply(eval.stress);
}

SolveResult solve(const Grid& grid, Scheme scheme, const PhaseMap& phases,
                  const LoadCase& load, const SolverConfig& cfg) {
  const ProjectionOperator op =
      load.formulation == Formulation::finite_strain
          ? build_projection(grid, scheme)
          : build_small_strain_projection(grid, scheme);
  return solve(op, phases, load, cfg);
}

SolveResult solve(const ProjectionOperator& op, const PhaseMap& phases,
                  const LoadCase& load, const SolverConfig& cfg) {
  cfg.validate();
  const Grid& grid = op.grid();
  phases.validate(grid);
  if (load.formulation != op.formulation()) {
    throw std::invalid_argument("solve: load formulation does not match operator");
  }
  if (load.formulation == Formulation::small_strain &&
      !load.mean.isApprox(load.mean.transpose(), 1e-14)) {
    throw std::invalid_argument("solve: small-strain mean must be symmetric");
  }

  SolveResult result{.field = TensorField::uniform(grid, op.nq(), load.mean),
                     .stress = TensorField{grid.nx, grid.ny, op.nq()}};
  Evaluation eval = evaluate(result.field, phases, load.formulation);
  for (int newton = 0; newton < cfg.newton_max_iter; ++newton) {
    TensorField res = op.apply(eval.stress);
    const double res_norm = res.norm();
    const double stress_norm = eval.stress.norm();
    result.residual_history.push_back(res_norm / std::max(stress_norm, k_tiny));
    if (res_norm <= cfg.newton_tol * std::max(stress_norm, k_tiny)) {
      result.converged = true;
      break;
    }
    TensorField rhs = res;
    scale(-1.0, rhs);
    TensorField step{grid.nx, grid.ny, op.nq()};
    const int iters = conjugate_gradients(
        [&](const TensorField& x, TensorField& y) {
          apply_tangent_into(eval.tangents, x, y);
          op.apply_in_place(y);
        },
        rhs, step, cfg.cg_tol, cfg.cg_max_iter);
    if (iters < 0) {
      throw std::runtime_error("solve: conjugate gradient stagnation in Newton step " +
                               std::to_string(newton));
    }
    result.cg_iterations += iters;
    ++result.newton_iterations;

    // Full Newton step; on residual increase back off by halving.
    double step_scale = 1.0;
    for (int attempt = 0;; ++attempt) {
      TensorField trial = result.field;
      axpy(step_scale, step, trial);
      bool ok = true;
      Evaluation trial_eval{TensorField{0, 0, 1}, {}};
      try {
        trial_eval = evaluate(trial, phases, load.formulation);
      } catch (const std::exception&) {
        ok = false;
      }
      if (ok) {
        const double trial_res = op.apply(trial_eval.stress).norm();
        if (trial_res <= res_norm || attempt >= cfg.max_backtrack) {
          result.field = std::move(trial);
          eval = std::move(trial_eval);
          break;
        }
      } else if (attempt >= cfg.max_backtrack) {
        throw std::runtime_error("solve: Newton step leaves admissible deformations");
      }
      step_scale *= 0.5;
    }
  }
  if (!result.converged) {
    // One last residual check in case the loop budget was exhausted right at convergence.
    TensorField res = op.apply(eval.stress);
    result.converged =
        res.norm() <= cfg.newton_tol * std::max(eval.stress.norm(), k_tiny);
  }
  result.stress = std::move(eval.stress);
  return result;
}

std::vector<double> DamageRunResult::damage_field(const PhaseMap& phases,
                                                  int nq) const {
  std::vector<double> out(static_cast<std::size_t>(phases.nx) * phases.ny, 0.0);
  for (int I = 0; I < phases.nx; ++I) {
    for (int J = 0; J < phases.ny; ++J) {
      const PhaseParams& p = phases.params_at(I, J);
      if (!p.has_damage) continue;
      double d = 0.0;
      for (int q = 0; q < nq; ++q) {
        const DamageState& s =
            state[(static_cast<std::size_t>(I) * phases.ny + J) * nq + q];
        d += 1.0 - damage_factor(s.kappa, p);
      }
      out[static_cast<std::size_t>(I) * phases.ny + J] = d / nq;
    }
  }
  return out;
}

DamageRunResult solve_damage(const Grid& grid, Scheme scheme, const PhaseMap& phases,
                             const LoadCase& load, const SolverConfig& cfg) {
  cfg.validate();
  phases.validate(grid);
  if (load.formulation != Formulation::small_strain) {
    throw std::invalid_argument("solve_damage: damage runs use the small-strain formulation");
  }
  if (load.n_steps < 1) throw std::invalid_argument("solve_damage: n_steps must be >= 1");
  const ProjectionOperator op = build_small_strain_projection(grid, scheme);
  const int nq = op.nq();
  const std::size_t npoints = static_cast<std::size_t>(grid.npts()) * nq;

  DamageRunResult run{.strain = TensorField::uniform(grid, nq, load.mean),
                      .stress = TensorField{grid.nx, grid.ny, nq},
                      .state = std::vector<DamageState>(npoints)};

  TensorField stress{grid.nx, grid.ny, nq};
  std::vector<Tangent> secants(npoints);
  std::vector<DamageState> trial(npoints);
  std::vector<DamageState> iter_state(npoints);

  // Stress, secants and trial states at the current strain iterate.
  auto evaluate_damage = [&](double amplitude) {
    for (int I = 0; I < grid.nx; ++I) {
      for (int J = 0; J < grid.ny; ++J) {
        const PhaseParams& p = phases.params_at(I, J);
        const Eigen::Matrix2d eig = amplitude * p.eigenstrain;
        for (int q = 0; q < nq; ++q) {
          const std::size_t pt = (static_cast<std::size_t>(I) * grid.ny + J) * nq + q;
          DamageResult dr =
              damage_stress(run.strain.tensor_at(I, J, q), eig, iter_state[pt], p);
          stress.set_tensor(I, J, q, dr.stress);
          secants[pt] = dr.secant;
          trial[pt] = dr.state;
        }
      }
    }
  };

  // Consecutive ramp steps are nearly identical; the previous step's
  // total strain update is an excellent first guess for the next one.
  TensorField step_update{grid.nx, grid.ny, nq};
  for (int step = 1; step <= load.n_steps; ++step) {
    const double amplitude = load.eigenstrain_amplitude * step / load.n_steps;
    DamageStepResult step_result{.step = step};
    const TensorField strain_before = run.strain;
    iter_state = run.state;
    for (int iter = 0; iter < cfg.newton_max_iter; ++iter) {
      evaluate_damage(amplitude);
      // Commit damage growth within the step, too: strain redistribution
      // can otherwise flip points between softening and failed across
      // secant iterations and lock the loop in a cycle. With the growth
      // kept, the secants are non-increasing and the iteration is
      // monotone; the overshoot of a not-yet-converged strain iterate is
      // bounded by the small per-step load increment.
      iter_state = trial;
      TensorField res = op.apply(stress);
      const double res_norm = res.norm();
      const double stress_norm = stress.norm();
      if (res_norm <= cfg.newton_tol * std::max(stress_norm, k_tiny)) {
        step_result.converged = true;
        break;
      }
      TensorField rhs = res;
      scale(-1.0, rhs);
      TensorField delta =
          iter == 0 ? step_update : TensorField{grid.nx, grid.ny, nq};
      // Inexact inner solves: the secants change between passes anyway, so
      // polishing the linearized system far below the outer convergence
      // threshold is wasted work. The relative CG tolerance is floored at
      // a tenth of the outer threshold measured against the current
      // residual; convergence is still decided on the true residual above.
      const double inner_tol = std::min(
          0.1, std::max(cfg.cg_tol, 0.1 * cfg.newton_tol *
                                        std::max(stress_norm, k_tiny) / res_norm));
      const int iters = conjugate_gradients(
          [&](const TensorField& x, TensorField& y) {
            apply_tangent_into(secants, x, y);
            op.apply_in_place(y);
          },
          rhs, delta, inner_tol, cfg.cg_max_iter);
      if (iters < 0) {
        throw std::runtime_error("solve_damage: conjugate gradient stagnation at step " +
                                 std::to_string(step));
      }
      axpy(1.0, delta, run.strain);
      step_result.cg_iterations += iters;
      ++step_result.iterations;
    }
    step_update = run.strain;
    axpy(-1.0, strain_before, step_update);
    if (!step_result.converged) {
      run.steps.push_back(step_result);
      run.converged = false;
      run.stress = stress;
      return run;  // state holds the last accepted step
    }
    // Accept: commit history.
    evaluate_damage(amplitude);
    run.state = trial;
    int damaged = 0;
    int failed = 0;
    int capable = 0;
    for (int I = 0; I < grid.nx; ++I) {
      for (int J = 0; J < grid.ny; ++J) {
        if (!phases.params_at(I, J).has_damage) continue;
        for (int q = 0; q < nq; ++q) {
          ++capable;
          const DamageState& s =
              run.state[(static_cast<std::size_t>(I) * grid.ny + J) * nq + q];
          if (s.stage != DamageStage::elastic) ++damaged;
          if (s.stage == DamageStage::failed) ++failed;
        }
      }
    }
    step_result.damage_fraction = capable > 0 ? static_cast<double>(damaged) / capable : 0.0;
    step_result.failed_fraction = capable > 0 ? static_cast<double>(failed) / capable : 0.0;
    if (damaged > 0 && run.first_damaged_voxels.empty()) {
      for (int I = 0; I < grid.nx; ++I) {
        for (int J = 0; J < grid.ny; ++J) {
          for (int q = 0; q < nq; ++q) {
            const DamageState& s =
                run.state[(static_cast<std::size_t>(I) * grid.ny + J) * nq + q];
            if (s.stage != DamageStage::elastic) {
              run.first_damaged_voxels.push_back(grid.index(I, J));
              break;
            }
          }
        }
      }
    }
    run.steps.push_back(step_result);
  }
  run.converged = true;
  run.stress = std::move(stress);
  return run;
}

}  // namespace homog
