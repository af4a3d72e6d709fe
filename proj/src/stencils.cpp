#include "homog/stencils.hpp"

#include <stdexcept>

namespace homog {

namespace {
using Complex = std::complex<double>;
constexpr Complex I{0.0, 1.0};
}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::fourier: return "fourier";
    case Scheme::central: return "central";
    case Scheme::forward: return "forward";
    case Scheme::least_squares: return "least_squares";
    case Scheme::fe_linear: return "fe_linear";
    case Scheme::fourier_two_point: return "fourier_two_point";
  }
  throw std::logic_error("unknown scheme");
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : all_schemes()) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown derivative scheme: " + name);
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> schemes{
      Scheme::fourier,       Scheme::central,   Scheme::forward,
      Scheme::least_squares, Scheme::fe_linear, Scheme::fourier_two_point};
  return schemes;
}

int nb_quad(Scheme scheme) {
  return (scheme == Scheme::fe_linear || scheme == Scheme::fourier_two_point) ? 2 : 1;
}

bool has_taps(Scheme scheme) {
  switch (scheme) {
    case Scheme::central:
    case Scheme::forward:
    case Scheme::least_squares:
    case Scheme::fe_linear:
      return true;
    default:
      return false;
  }
}

bool even_grid_safe(Scheme scheme) {
  return scheme != Scheme::fourier && scheme != Scheme::central;
}

void check_admissible(Scheme scheme, const Grid& grid) {
  if (even_grid_safe(scheme)) return;
  if (grid.nx % 2 == 0 || grid.ny % 2 == 0) {
    throw std::invalid_argument(
        to_string(scheme) +
        " scheme is ambiguous at the Nyquist frequency and requires odd grid sizes");
  }
}

std::vector<Stencil> stencil_table(Scheme scheme) {
  switch (scheme) {
    case Scheme::central:
      return {
          {0, 0, {{-1, 0, -0.5}, {1, 0, 0.5}}},
          {1, 0, {{0, -1, -0.5}, {0, 1, 0.5}}},
      };
    case Scheme::forward:
      return {
          {0, 0, {{0, 0, -1.0}, {1, 0, 1.0}}},
          {1, 0, {{0, 0, -1.0}, {0, 1, 1.0}}},
      };
    case Scheme::least_squares:
      return {
          {0, 0, {{0, 0, -0.5}, {1, 0, 0.5}, {0, 1, -0.5}, {1, 1, 0.5}}},
          {1, 0, {{0, 0, -0.5}, {0, 1, 0.5}, {1, 0, -0.5}, {1, 1, 0.5}}},
      };
    case Scheme::fe_linear:
      // Element 1 (lower triangle) is the forward-differences tap set;
      // element 2 (upper triangle) is backward differences on shifted nodes.
      return {
          {0, 0, {{0, 0, -1.0}, {1, 0, 1.0}}},
          {1, 0, {{0, 0, -1.0}, {0, 1, 1.0}}},
          {0, 1, {{0, 1, -1.0}, {1, 1, 1.0}}},
          {1, 1, {{1, 0, -1.0}, {1, 1, 1.0}}},
      };
    default:
      throw std::invalid_argument(to_string(scheme) +
                                  " is a symbol-only scheme with no finite tap set");
  }
}

namespace {

Complex symbol_from_taps(const Stencil& stencil, const Wavevector& k,
                         const Grid& grid) {
  Complex sum{0.0, 0.0};
  for (const Tap& tap : stencil.taps) {
    const double phase = k.kx * tap.di * grid.dx() + k.ky * tap.dj * grid.dy();
    sum += tap.coeff * std::exp(I * phase);
  }
  return sum / grid.spacing(stencil.axis);
}

const Stencil& find_stencil(Scheme scheme, int axis, int quad) {
  static std::vector<Stencil> tables[4];
  int slot;
  switch (scheme) {
    case Scheme::central: slot = 0; break;
    case Scheme::forward: slot = 1; break;
    case Scheme::least_squares: slot = 2; break;
    case Scheme::fe_linear: slot = 3; break;
    default: throw std::logic_error("no tap table");
  }
  if (tables[slot].empty()) tables[slot] = stencil_table(scheme);
  for (const Stencil& s : tables[slot]) {
    if (s.axis == axis && s.quad == quad) return s;
  }
  throw std::out_of_range("no stencil for this (axis, quad)");
}

}  // namespace

Complex symbol(Scheme scheme, int axis, int quad, const Wavevector& k,
               const Grid& grid) {
  if (quad < 0 || quad >= nb_quad(scheme)) {
    throw std::out_of_range("evaluation point out of range for scheme");
  }
  switch (scheme) {
    case Scheme::fourier:
      return I * k.k(axis);
    case Scheme::fourier_two_point: {
      // The derivative is evaluated at the triangle centroids, shifted by
      // -+ (dx, dy)/6 from the voxel center; the shift appears as a phase.
      const double shift = (k.kx * grid.dx() + k.ky * grid.dy()) / 6.0;
      const Complex phase = std::exp((quad == 0 ? -I : I) * shift);
      return I * k.k(axis) * phase;
    }
    default:
      return symbol_from_taps(find_stencil(scheme, axis, quad), k, grid);
  }
}

Eigen::Matrix2d least_squares_gradient(
    const std::array<Eigen::Vector2d, 4>& corners, const Grid& grid) {
  const Eigen::Vector2d& c00 = corners[0];
  const Eigen::Vector2d& c10 = corners[1];
  const Eigen::Vector2d& c01 = corners[2];
  const Eigen::Vector2d& c11 = corners[3];
  Eigen::Matrix2d f;
  f.col(0) = (c10 - c00 + c11 - c01) / (2.0 * grid.dx());
  f.col(1) = (c01 - c00 + c11 - c10) / (2.0 * grid.dy());
  return f;
}

}  // namespace homog
