#ifndef HOMOG_PROJECTION_HPP
#define HOMOG_PROJECTION_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "homog/field.hpp"
#include "homog/fft.hpp"
#include "homog/grid.hpp"
#include "homog/stencils.hpp"

namespace homog {

enum class Formulation { finite_strain, small_strain };

std::string to_string(Formulation form);

using MatrixXcd = Eigen::MatrixXcd;

/**
 * Compatibility projection, block-diagonal in Fourier space.
 *
 * Per wavevector the operator is stored as a dense complex matrix acting
 * on the flattened per-point tensor (q, i, j). The combined derivative
 * index is q-major: alpha = 2 q + spatial direction. The block at k = 0
 * is identically zero; the prescribed mean deformation is carried by the
 * solver, outside the operator.
 */
class ProjectionOperator {
 public:
  ProjectionOperator(const Grid& grid, Scheme scheme, Formulation form);

  const Grid& grid() const { return grid_; }
  Scheme scheme() const { return scheme_; }
  Formulation formulation() const { return form_; }
  int nq() const { return nq_; }
  /// Dimension of the per-wavevector block (nq * D * D).
  int block_dim() const { return dim_; }

  const WavevectorTable& wavevectors() const { return wavevectors_; }

  Eigen::Map<const MatrixXcd> block(int k_index) const {
    return {blocks_.data() + static_cast<std::size_t>(k_index) * dim_ * dim_,
            dim_, dim_};
  }
  Eigen::Map<MatrixXcd> block(int k_index) {
    return {blocks_.data() + static_cast<std::size_t>(k_index) * dim_ * dim_,
            dim_, dim_};
  }

  /// Derivative symbol D_(q,alpha)(k) for combined index alpha_c = 2 q + alpha.
  Complex symbol_at(int k_index, int alpha_c) const {
    return symbols_[static_cast<std::size_t>(k_index) * 2 * nq_ + alpha_c];
  }

  /**
   * Projects a real-space field onto its compatible part:
   * idft(block(k) . dft(field)). The mean (k = 0) component of the output
   * is zero. An imaginary residue above 1e-10 * |field| signals a broken
   * symbol table and raises.
   */
  TensorField apply(const TensorField& field) const;

  /// In-place variant of apply(); avoids allocations in the Krylov loop.
  void apply_in_place(TensorField& field) const;

  /**
   * True when the blocks satisfy B(-k) = conj(B(k)), which lets apply()
   * batch two real components per complex transform.
   */
  bool hermitian_pairing() const { return hermitian_; }

 private:
  friend ProjectionOperator build_projection(const Grid&, Scheme);
  friend ProjectionOperator build_small_strain_projection(const Grid&, Scheme);
  friend ProjectionOperator divergence_projection(const ProjectionOperator&);

  /// Detects the Hermitian pairing B(-k) = conj(B(k)); called by the builders.
  void finalize();
  void apply_packed(TensorField& field) const;
  void apply_full(TensorField& field) const;

  Grid grid_;
  Scheme scheme_;
  Formulation form_;
  int nq_;
  int dim_;
  WavevectorTable wavevectors_;
  std::vector<Complex> symbols_;  // Nk x (2 nq)
  std::vector<Complex> blocks_;   // Nk x dim x dim
  std::vector<int> neg_index_;    // flat index of -k per wavevector
  bool hermitian_{false};
};

/// Finite-strain compatibility projection, g = D D* / (D . D*) per wavevector.
ProjectionOperator build_projection(const Grid& grid, Scheme scheme);

/// Symmetrized small-strain projection built from g_(Theta Lambda) and h.
ProjectionOperator build_small_strain_projection(const Grid& grid, Scheme scheme);

/// Complement 1 - g at k != 0; projects fluctuation fields onto divergence-free part.
ProjectionOperator divergence_projection(const ProjectionOperator& op);

/// Least-squares potential of a tensor field plus its mean gradient per point.
struct DisplacementReconstruction {
  VectorField fluctuation;                  // nodal, zero mean
  std::vector<Eigen::Matrix2d> mean_gradient;  // one per evaluation point
};

/**
 * Inverts the derivative: u_i(k) = D^-1(k) . v_i(k) per tensor row for
 * k != 0; the k = 0 content is returned separately as the mean gradient.
 */
DisplacementReconstruction reconstruct_displacement(const ProjectionOperator& op,
                                                    const TensorField& field);

/// Applies the scheme's derivative stencils to a nodal map, giving a tensor field.
TensorField gradient_field(const Grid& grid, Scheme scheme, const VectorField& chi);

}  // namespace homog

#endif
