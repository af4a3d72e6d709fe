#ifndef HOMOG_FEM_HPP
#define HOMOG_FEM_HPP

#include <Eigen/Dense>

#include "homog/field.hpp"
#include "homog/materials.hpp"

namespace homog {

struct FemSolution {
  VectorField displacement;  // periodic fluctuation, zero at node (0, 0)
  TensorField strain;        // per voxel: (element 1, element 2) strains
};

/**
 * Direct small-strain linear finite-element solve on the structured
 * triangle mesh (two elements per voxel) with periodic node
 * identification. The mean strain enters through the affine split
 * u = e_mean . r + u_tilde; the assembled system is solved with a sparse
 * Cholesky factorization, pinning one node against rigid translation.
 *
 * Independent of the projection solver; used as its ground truth.
 */
FemSolution fem_direct_solve(const Grid& grid, const PhaseMap& phases,
                             const Eigen::Matrix2d& mean_strain);

}  // namespace homog

#endif
