#ifndef HOMOG_STENCILS_HPP
#define HOMOG_STENCILS_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "homog/grid.hpp"

namespace homog {

/// The six derivative schemes the projection can be built from.
enum class Scheme {
  fourier,
  central,
  forward,
  least_squares,
  fe_linear,
  fourier_two_point,
};

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);
const std::vector<Scheme>& all_schemes();

/// Evaluation points per voxel: 2 for the two-element schemes, else 1.
int nb_quad(Scheme scheme);

/// True if the scheme is defined by a finite real-space tap set.
bool has_taps(Scheme scheme);

/**
 * A scheme is safe on even-sized grids iff its symbol at the Nyquist
 * frequency is nonzero and even, D(k_Ny) = D(-k_Ny). The pure Fourier
 * derivative and central differences violate this and are restricted to
 * odd grids.
 */
bool even_grid_safe(Scheme scheme);

/// One stencil tap: node offset (di, dj) and coefficient.
struct Tap {
  int di;
  int dj;
  double coeff;
};

/**
 * Real-space convolution stencil for one derivative direction at one
 * evaluation point. Coefficients sum to zero; the 1/spacing factor is
 * applied when the Fourier symbol is formed.
 */
struct Stencil {
  int axis;       // 0 = x, 1 = y
  int quad;       // evaluation point
  std::vector<Tap> taps;
};

/// The tap sets of all (axis, quad) derivatives; throws for symbol-only schemes.
std::vector<Stencil> stencil_table(Scheme scheme);

/**
 * Fourier symbol D_alpha(k) of the derivative in direction `axis` at
 * evaluation point `quad`.
 */
std::complex<double> symbol(Scheme scheme, int axis, int quad,
                            const Wavevector& k, const Grid& grid);

/**
 * Closed-form least-squares deformation gradient of a single voxel from
 * its four displaced corners, ordered (chi00, chi10, chi01, chi11).
 */
Eigen::Matrix2d least_squares_gradient(
    const std::array<Eigen::Vector2d, 4>& corners, const Grid& grid);

/// Throws if the scheme cannot be used on this grid parity.
void check_admissible(Scheme scheme, const Grid& grid);

}  // namespace homog

#endif
