#ifndef HOMOG_GRID_HPP
#define HOMOG_GRID_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace homog {

/**
 * Periodic rectangular 2D grid.
 *
 * The cell of edge lengths (lx, ly) is divided into nx * ny voxels of
 * spacing (dx, dy). Voxel (I, J) has its lower-left corner at
 * (I * dx, J * dy). Fields may carry nb_quad evaluation points per voxel.
 */
struct Grid {
  int nx;
  int ny;
  double lx;
  double ly;

  Grid(int nx_, int ny_, double lx_, double ly_)
      : nx{nx_}, ny{ny_}, lx{lx_}, ly{ly_} {
    if (nx < 2 || ny < 2) {
      throw std::invalid_argument("Grid: need at least 2 points per direction");
    }
    if (lx <= 0 || ly <= 0) {
      throw std::invalid_argument("Grid: edge lengths must be positive");
    }
  }

  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  double spacing(int axis) const { return axis == 0 ? dx() : dy(); }
  int npts(int axis) const { return axis == 0 ? nx : ny; }
  int npts() const { return nx * ny; }

  /// Flat row-major index of voxel (I, J).
  int index(int I, int J) const { return I * ny + J; }
};

/// One entry of the wavevector table: k_i = 2 pi m_i / L_i.
struct Wavevector {
  double kx;
  double ky;
  int mx;
  int my;

  double k(int axis) const { return axis == 0 ? kx : ky; }
  bool is_zero() const { return mx == 0 && my == 0; }
};

/// Maps FFT output index to the signed mode number with k dx in [-pi, pi).
inline int wavenumber(int idx, int n) { return idx < (n + 1) / 2 ? idx : idx - n; }

using WavevectorTable = std::vector<Wavevector>;

/**
 * Enumerates the wavevectors of the grid, one per voxel index (I, J),
 * in the same row-major order used for fields. For even n the Nyquist
 * mode -n/2 appears exactly once.
 */
inline WavevectorTable build_wavevectors(const Grid& grid) {
  WavevectorTable table;
  table.reserve(static_cast<std::size_t>(grid.npts()));
  for (int I = 0; I < grid.nx; ++I) {
    const int mx = wavenumber(I, grid.nx);
    for (int J = 0; J < grid.ny; ++J) {
      const int my = wavenumber(J, grid.ny);
      table.push_back({2 * M_PI * mx / grid.lx, 2 * M_PI * my / grid.ly, mx, my});
    }
  }
  return table;
}

}  // namespace homog

#endif
