#ifndef HOMOG_ESHELBY_HPP
#define HOMOG_ESHELBY_HPP

#include <complex>

#include <Eigen/Dense>

#include "homog/field.hpp"
#include "homog/grid.hpp"
#include "homog/stencils.hpp"

namespace homog {

/**
 * Plane-strain cylindrical inhomogeneity in an infinite matrix under a
 * uniform far-field strain, zero eigenstrain. Only the circular case
 * a == b is supported.
 */
struct EshelbyProblem {
  double half_axis_a{0.1};
  double half_axis_b{0.1};
  double matrix_modulus{1.0};
  double matrix_poisson{0.33};
  double inclusion_modulus{0.1};
  double inclusion_poisson{0.33};
  Eigen::Matrix2d far_strain{Eigen::Matrix2d::Zero()};
  int images{5};  // periodic correction sums (2 images + 1)^2 inclusions
};

/**
 * Analytic solution via Kolosov-Muskhelishvili potentials. The matrix
 * carries phi(z) = Gamma z + A a^2/z and psi(z) = Gamma' z + B a^2/z
 * + C a^4/z^3; the inclusion field is affine. The coefficients are
 * determined from traction and displacement continuity on the interface,
 * collocated and solved in the least-squares sense; a non-negligible
 * collocation residual raises, which guards against an incomplete ansatz.
 */
class EshelbySolution {
 public:
  explicit EshelbySolution(const EshelbyProblem& prob);

  /// Strain at position x relative to the inclusion center. Boundary
  /// points are evaluated from the exterior branch.
  Eigen::Matrix2d strain_at(const Eigen::Vector2d& x) const;

  /// Uniform interior strain.
  Eigen::Matrix2d interior_strain() const;

 private:
  double radius_;
  double mu_m_, nu_m_, mu_i_, nu_i_;
  std::complex<double> gamma_, gamma_p_;       // far-field potential slopes
  std::complex<double> a_, b_, c_, g0_, g1_;   // matched coefficients
};

/// The analytic field of a single inhomogeneity, M = 0 periodic images.
Eigen::Matrix2d eshelby_field(const EshelbyProblem& prob, const Eigen::Vector2d& x);

struct PeriodicEshelbyField {
  TensorField field;               // sampled at the scheme's evaluation points
  Eigen::Matrix2d inclusion_mean;  // average over points inside the inclusion
  Eigen::Matrix2d cell_mean;       // average over all evaluation points
};

/// Real-space position of evaluation point q of voxel (I, J) for the scheme.
Eigen::Vector2d evaluation_point(const Grid& grid, Scheme scheme, int I, int J, int q);

/**
 * Superposes the fluctuation fields of (2 images + 1)^2 non-interacting
 * inclusions centered on the periodic lattice, sampled on the grid. The
 * inclusion sits at the cell center.
 */
PeriodicEshelbyField eshelby_periodic(const EshelbyProblem& prob, const Grid& grid,
                                      Scheme scheme);

/// Image-corrected strain at position x (cell coordinates), without sampling.
Eigen::Matrix2d eshelby_periodic_at(const EshelbyProblem& prob, const EshelbySolution& sol,
                                    const Grid& grid, const Eigen::Vector2d& x);

}  // namespace homog

#endif
