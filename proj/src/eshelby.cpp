#include "homog/eshelby.hpp"

#include <stdexcept>

namespace homog {

namespace {

using Cplx = std::complex<double>;

double kolosov_kappa(double nu) { return 3.0 - 4.0 * nu; }

double shear_modulus(double e, double nu) { return e / (2.0 * (1.0 + nu)); }

// Far-field stress from far-field strain, plane strain, matrix moduli.
Eigen::Matrix2d far_stress(const EshelbyProblem& prob) {
  const double nu = prob.matrix_poisson;
  const double lambda = prob.matrix_modulus * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  const double mu = shear_modulus(prob.matrix_modulus, nu);
  return lambda * prob.far_strain.trace() * Eigen::Matrix2d::Identity() +
         2.0 * mu * prob.far_strain;
}

struct BoundaryValues {
  Cplx traction;      // phi + t conj(phi') + conj(psi)
  Cplx displacement;  // (kappa phi - t conj(phi') - conj(psi)) / (2 mu)
};

// Potentials on either side of |t| = a, as a function of the ten real
// coefficient unknowns packed as (A, B, C, g0, g1).
BoundaryValues matrix_side(const Cplx& t, double a, double mu, double kappa,
                           const Cplx& gamma, const Cplx& gamma_p, const Cplx& A,
                           const Cplx& B, const Cplx& C) {
  const double a2 = a * a;
  const Cplx phi = gamma * t + A * a2 / t;
  const Cplx dphi = gamma - A * a2 / (t * t);
  const Cplx psi = gamma_p * t + B * a2 / t + C * a2 * a2 / (t * t * t);
  return {phi + t * std::conj(dphi) + std::conj(psi),
          (kappa * phi - t * std::conj(dphi) - std::conj(psi)) / (2.0 * mu)};
}

BoundaryValues inclusion_side(const Cplx& t, double mu, double kappa, const Cplx& g0,
                              const Cplx& g1) {
  const Cplx phi = g0 * t;
  const Cplx psi = g1 * t;
  return {phi + t * std::conj(g0) + std::conj(psi),
          (kappa * phi - t * std::conj(g0) - std::conj(psi)) / (2.0 * mu)};
}

}  // namespace

EshelbySolution::EshelbySolution(const EshelbyProblem& prob)
    : radius_{prob.half_axis_a},
      mu_m_{shear_modulus(prob.matrix_modulus, prob.matrix_poisson)},
      nu_m_{prob.matrix_poisson},
      mu_i_{shear_modulus(prob.inclusion_modulus, prob.inclusion_poisson)},
      nu_i_{prob.inclusion_poisson} {
  if (prob.half_axis_a <= 0.0 || prob.half_axis_b <= 0.0) {
    throw std::invalid_argument("EshelbySolution: half axes must be positive");
  }
  if (prob.half_axis_a != prob.half_axis_b) {
    throw std::invalid_argument(
        "EshelbySolution: only the circular case a == b is implemented");
  }
  const Eigen::Matrix2d sigma = far_stress(prob);
  gamma_ = Cplx{(sigma(0, 0) + sigma(1, 1)) / 4.0, 0.0};
  gamma_p_ = Cplx{(sigma(1, 1) - sigma(0, 0)) / 2.0, sigma(0, 1)};

  const double kappa_m = kolosov_kappa(nu_m_);
  const double kappa_i = kolosov_kappa(nu_i_);

  // Continuity of traction and displacement on the interface, collocated
  // at angles avoiding symmetry degeneracies; the conditions are affine in
  // the real and imaginary parts of (A, B, C, g0, g1).
  constexpr int n_angles = 16;
  constexpr int n_unknowns = 10;
  auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    const Cplx A{x[0], x[1]}, B{x[2], x[3]}, C{x[4], x[5]};
    const Cplx g0{x[6], x[7]}, g1{x[8], x[9]};
    for (int j = 0; j < n_angles; ++j) {
      const double theta = 2.0 * M_PI * (j + 0.37) / n_angles;
      const Cplx t = radius_ * std::exp(Cplx{0.0, theta});
      const BoundaryValues outer =
          matrix_side(t, radius_, mu_m_, kappa_m, gamma_, gamma_p_, A, B, C);
      const BoundaryValues inner = inclusion_side(t, mu_i_, kappa_i, g0, g1);
      const Cplx dt = outer.traction - inner.traction;
      const Cplx du = outer.displacement - inner.displacement;
      r[4 * j] = dt.real();
      r[4 * j + 1] = dt.imag();
      r[4 * j + 2] = du.real();
      r[4 * j + 3] = du.imag();
    }
  };

  Eigen::VectorXd r0(4 * n_angles);
  residual(Eigen::VectorXd::Zero(n_unknowns), r0);
  Eigen::MatrixXd m(4 * n_angles, n_unknowns);
  Eigen::VectorXd rj(4 * n_angles);
  for (int j = 0; j < n_unknowns; ++j) {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(n_unknowns);
    unit[j] = 1.0;
    residual(unit, rj);
    m.col(j) = rj - r0;
  }
  const Eigen::VectorXd x = m.colPivHouseholderQr().solve(-r0);
  residual(x, rj);
  const double scale = std::max(r0.norm(), 1.0);
  if (rj.norm() > 1e-10 * scale) {
    throw std::runtime_error(
        "EshelbySolution: interface conditions not satisfied by the potential ansatz");
  }
  a_ = Cplx{x[0], x[1]};
  b_ = Cplx{x[2], x[3]};
  c_ = Cplx{x[4], x[5]};
  g0_ = Cplx{x[6], x[7]};
  g1_ = Cplx{x[8], x[9]};
}

Eigen::Matrix2d EshelbySolution::strain_at(const Eigen::Vector2d& pos) const {
  const Cplx z{pos[0], pos[1]};
  const double r = std::abs(z);
  Cplx dphi, ddphi, dpsi;
  double mu, nu;
  if (r < radius_ && r > 0.0) {
    dphi = g0_;
    ddphi = Cplx{0.0, 0.0};
    dpsi = g1_;
    mu = mu_i_;
    nu = nu_i_;
  } else if (r == 0.0) {
    dphi = g0_;
    ddphi = Cplx{0.0, 0.0};
    dpsi = g1_;
    mu = mu_i_;
    nu = nu_i_;
  } else {
    const double a2 = radius_ * radius_;
    dphi = gamma_ - a_ * a2 / (z * z);
    ddphi = 2.0 * a_ * a2 / (z * z * z);
    dpsi = gamma_p_ - b_ * a2 / (z * z) - 3.0 * c_ * a2 * a2 / (z * z * z * z);
    mu = mu_m_;
    nu = nu_m_;
  }
  const double trace = 4.0 * dphi.real();  // sigma_xx + sigma_yy
  const Cplx dev = 2.0 * (std::conj(z) * ddphi + dpsi);
  const double sxx = 0.5 * (trace - dev.real());
  const double syy = 0.5 * (trace + dev.real());
  const double sxy = 0.5 * dev.imag();
  Eigen::Matrix2d strain;
  strain(0, 0) = (sxx - nu * trace) / (2.0 * mu);
  strain(1, 1) = (syy - nu * trace) / (2.0 * mu);
  strain(0, 1) = strain(1, 0) = sxy / (2.0 * mu);
  return strain;
}

Eigen::Matrix2d EshelbySolution::interior_strain() const {
  return strain_at(Eigen::Vector2d::Zero());
}

Eigen::Matrix2d eshelby_field(const EshelbyProblem& prob, const Eigen::Vector2d& x) {
  return EshelbySolution{prob}.strain_at(x);
}

Eigen::Vector2d evaluation_point(const Grid& grid, Scheme scheme, int I, int J, int q) {
  Eigen::Vector2d center{(I + 0.5) * grid.dx(), (J + 0.5) * grid.dy()};
  if (nb_quad(scheme) == 2) {
    const double sign = q == 0 ? -1.0 : 1.0;
    center += sign * Eigen::Vector2d{grid.dx() / 6.0, grid.dy() / 6.0};
  }
  return center;
}

Eigen::Matrix2d eshelby_periodic_at(const EshelbyProblem& prob, const EshelbySolution& sol,
                                    const Grid& grid, const Eigen::Vector2d& x) {
  const Eigen::Vector2d center{0.5 * grid.lx, 0.5 * grid.ly};
  Eigen::Matrix2d strain = prob.far_strain;
  for (int p = -prob.images; p <= prob.images; ++p) {
    for (int q = -prob.images; q <= prob.images; ++q) {
      const Eigen::Vector2d rel =
          x - center - Eigen::Vector2d{p * grid.lx, q * grid.ly};
      strain += sol.strain_at(rel) - prob.far_strain;
    }
  }
  return strain;
}

PeriodicEshelbyField eshelby_periodic(const EshelbyProblem& prob, const Grid& grid,
                                      Scheme scheme) {
  const EshelbySolution sol{prob};
  const int nq = nb_quad(scheme);
  const Eigen::Vector2d center{0.5 * grid.lx, 0.5 * grid.ly};
  PeriodicEshelbyField out{TensorField{grid.nx, grid.ny, nq},
                           Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};
  int n_inside = 0;
  for (int I = 0; I < grid.nx; ++I) {
    for (int J = 0; J < grid.ny; ++J) {
      for (int q = 0; q < nq; ++q) {
        const Eigen::Vector2d x = evaluation_point(grid, scheme, I, J, q);
        const Eigen::Matrix2d strain = eshelby_periodic_at(prob, sol, grid, x);
        out.field.set_tensor(I, J, q, strain);
        out.cell_mean += strain;
        if ((x - center).norm() < prob.half_axis_a) {
          out.inclusion_mean += strain;
          ++n_inside;
        }
      }
    }
  }
  out.cell_mean /= static_cast<double>(grid.npts()) * nq;
  if (n_inside == 0) {
    throw std::runtime_error("eshelby_periodic: no evaluation point falls inside the inclusion");
  }
  out.inclusion_mean /= n_inside;
  return out;
}

}  // namespace homog
