#ifndef HOMOG_RINGING_HPP
#define HOMOG_RINGING_HPP

#include <vector>

#include "homog/fft.hpp"
#include "homog/field.hpp"
#include "homog/grid.hpp"

namespace homog {

/// High-band threshold as a fraction of the Nyquist frequency.
inline constexpr double k_ringing_band = 0.75;

/**
 * Fraction of fluctuation spectral energy in the high band
 * {k : |k_alpha| >= 3/4 k_Ny in each direction}, k = 0 excluded.
 * 1 for a pure Nyquist checkerboard, 0 for smooth band-limited fields;
 * invariant under adding a constant and under scaling.
 */
inline double ringing_score(const std::vector<double>& values, const Grid& grid) {
  const std::vector<Complex> spectrum = dft_scalar(values, grid);
  double total = 0.0;
  double high = 0.0;
  for (int I = 0; I < grid.nx; ++I) {
    const int mx = wavenumber(I, grid.nx);
    for (int J = 0; J < grid.ny; ++J) {
      const int my = wavenumber(J, grid.ny);
      if (mx == 0 && my == 0) continue;
      const double energy = std::norm(spectrum[static_cast<std::size_t>(I) * grid.ny + J]);
      total += energy;
      // |k_alpha| >= (3/4) pi / spacing  <=>  |m_alpha| >= (3/4) N_alpha / 2
      if (std::abs(mx) >= k_ringing_band * grid.nx / 2.0 &&
          std::abs(my) >= k_ringing_band * grid.ny / 2.0) {
        high += energy;
      }
    }
  }
  return total > 0.0 ? high / total : 0.0;
}

/// Extracts tensor component (i, j) at evaluation point q as a scalar grid field.
inline std::vector<double> component_field(const TensorField& field, int q, int i, int j) {
  std::vector<double> out(static_cast<std::size_t>(field.nx()) * field.ny());
  for (int I = 0; I < field.nx(); ++I)
    for (int J = 0; J < field.ny(); ++J)
      out[static_cast<std::size_t>(I) * field.ny() + J] = field(I, J, q, i, j).real();
  return out;
}

}  // namespace homog

#endif
