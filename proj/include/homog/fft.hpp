#ifndef HOMOG_FFT_HPP
#define HOMOG_FFT_HPP

#include "homog/field.hpp"
#include "homog/grid.hpp"

namespace homog {

/**
 * Unnormalized forward transform, f_hat(k) = sum_r f(r) exp(-i k . r),
 * applied per tensor component and evaluation point. The output index
 * (I, J) corresponds to the wavevector at the same index in
 * build_wavevectors().
 */
TensorField dft(const TensorField& field, const Grid& grid);

/// Inverse transform; carries the 1/N normalization so idft(dft(f)) == f.
TensorField idft(const TensorField& field, const Grid& grid);

/// Allocation-free variants for the solver's inner loop.
void dft_in_place(TensorField& field, const Grid& grid);
void idft_in_place(TensorField& field, const Grid& grid);

/**
 * Cached batched transform of ncomp interleaved components on raw data;
 * unnormalized in both directions.
 */
void fft_execute_cached(int nx, int ny, int ncomp, bool forward, Complex* data);

VectorField dft(const VectorField& field, const Grid& grid);
VectorField idft(const VectorField& field, const Grid& grid);

/// Forward transform of a scalar field given as row-major (nx * ny) values.
std::vector<Complex> dft_scalar(const std::vector<double>& values, const Grid& grid);

}  // namespace homog

#endif
