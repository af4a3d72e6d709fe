#include "homog/fem.hpp"

#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>

namespace homog {

namespace {

// Voigt order (e_xx, e_yy, 2 e_xy); C maps strain to stress.
Eigen::Matrix3d voigt_stiffness(const PhaseParams& p) {
  const double lambda = p.lambda();
  const double mu = p.mu();
  Eigen::Matrix3d c;
  c << lambda + 2 * mu, lambda, 0, lambda, lambda + 2 * mu, 0, 0, 0, mu;
  return c;
}

}  // namespace

FemSolution fem_direct_solve(const Grid& grid, const PhaseMap& phases,
                             const Eigen::Matrix2d& mean_strain) {
  phases.validate(grid);
  if (!mean_strain.isApprox(mean_strain.transpose(), 1e-14)) {
    throw std::invalid_argument("fem_direct_solve: mean strain must be symmetric");
  }
  const int nx = grid.nx;
  const int ny = grid.ny;
  const double dx = grid.dx();
  const double dy = grid.dy();
  const int nnodes = nx * ny;
  const int ndof = 2 * nnodes;
  const double area = 0.5 * dx * dy;

  auto node = [&](int I, int J) {
    return ((I % nx + nx) % nx) * ny + (J % ny + ny) % ny;
  };

  // Per-element node triples and B matrices (strain from nodal displacements).
  // Element 1 spans (I,J), (I+1,J), (I,J+1); element 2 spans (I+1,J+1),
  // (I,J+1), (I+1,J) with backward-difference gradients.
  struct ElementGeometry {
    std::array<std::array<int, 2>, 3> offsets;
    Eigen::Matrix<double, 3, 6> b;
  };
  auto b_matrix = [&](const std::array<double, 3>& ddx,
                      const std::array<double, 3>& ddy) {
    Eigen::Matrix<double, 3, 6> b = Eigen::Matrix<double, 3, 6>::Zero();
    for (int a = 0; a < 3; ++a) {
      b(0, 2 * a) = ddx[a];
      b(1, 2 * a + 1) = ddy[a];
      b(2, 2 * a) = ddy[a];
      b(2, 2 * a + 1) = ddx[a];
    }
    return b;
  };
  const std::array<ElementGeometry, 2> elements{
      ElementGeometry{{{{0, 0}, {1, 0}, {0, 1}}},
                      b_matrix({-1 / dx, 1 / dx, 0}, {-1 / dy, 0, 1 / dy})},
      ElementGeometry{{{{1, 1}, {0, 1}, {1, 0}}},
                      b_matrix({1 / dx, -1 / dx, 0}, {1 / dy, 0, -1 / dy})}};

  const Eigen::Vector3d mean_voigt{mean_strain(0, 0), mean_strain(1, 1),
                                   2 * mean_strain(0, 1)};

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nnodes) * 72);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ndof);

  for (int I = 0; I < nx; ++I) {
    for (int J = 0; J < ny; ++J) {
      const Eigen::Matrix3d c = voigt_stiffness(phases.params_at(I, J));
      for (const ElementGeometry& elem : elements) {
        const Eigen::Matrix<double, 6, 6> ke =
            area * elem.b.transpose() * c * elem.b;
        const Eigen::Matrix<double, 6, 1> fe =
            -area * elem.b.transpose() * (c * mean_voigt);
        std::array<int, 3> nodes;
        for (int a = 0; a < 3; ++a) {
          nodes[static_cast<std::size_t>(a)] =
              node(I + elem.offsets[static_cast<std::size_t>(a)][0],
                   J + elem.offsets[static_cast<std::size_t>(a)][1]);
        }
        for (int a = 0; a < 3; ++a) {
          for (int ca = 0; ca < 2; ++ca) {
            const int row = 2 * nodes[static_cast<std::size_t>(a)] + ca;
            rhs[row] += fe[2 * a + ca];
            for (int b = 0; b < 3; ++b) {
              for (int cb = 0; cb < 2; ++cb) {
                triplets.emplace_back(row, 2 * nodes[static_cast<std::size_t>(b)] + cb,
                                      ke(2 * a + ca, 2 * b + cb));
              }
            }
          }
        }
      }
    }
  }

  // Pin both components of node (0, 0) to remove the translation kernel.
  for (int c = 0; c < 2; ++c) {
    rhs[c] = 0.0;
  }
  std::vector<Eigen::Triplet<double>> reduced;
  reduced.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (t.row() < 2 || t.col() < 2) continue;
    reduced.push_back(t);
  }
  for (int c = 0; c < 2; ++c) reduced.emplace_back(c, c, 1.0);

  Eigen::SparseMatrix<double> stiffness(ndof, ndof);
  stiffness.setFromTriplets(reduced.begin(), reduced.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor{stiffness};
  if (factor.info() != Eigen::Success) {
    throw std::runtime_error("fem_direct_solve: singular system beyond the rigid-body kernel");
  }
  const Eigen::VectorXd u = factor.solve(rhs);
  if (factor.info() != Eigen::Success) {
    throw std::runtime_error("fem_direct_solve: sparse solve failed");
  }

  FemSolution out{VectorField{nx, ny}, TensorField{nx, ny, 2}};
  for (int I = 0; I < nx; ++I) {
    for (int J = 0; J < ny; ++J) {
      out.displacement.set_vector(I, J, {u[2 * node(I, J)], u[2 * node(I, J) + 1]});
    }
  }
  for (int I = 0; I < nx; ++I) {
    for (int J = 0; J < ny; ++J) {
      for (int e = 0; e < 2; ++e) {
        const ElementGeometry& elem = elements[static_cast<std::size_t>(e)];
        Eigen::Matrix<double, 6, 1> ue;
        for (int a = 0; a < 3; ++a) {
          const int n = node(I + elem.offsets[static_cast<std::size_t>(a)][0],
                             J + elem.offsets[static_cast<std::size_t>(a)][1]);
          ue[2 * a] = u[2 * n];
          ue[2 * a + 1] = u[2 * n + 1];
        }
        const Eigen::Vector3d strain_voigt = mean_voigt + elem.b * ue;
        Eigen::Matrix2d strain;
        strain << strain_voigt[0], 0.5 * strain_voigt[2], 0.5 * strain_voigt[2],
            strain_voigt[1];
        out.strain.set_tensor(I, J, e, strain);
      }
    }
  }
  return out;
}

}  // namespace homog
