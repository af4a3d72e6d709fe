#include "homog/projection.hpp"

#include <sstream>
#include <stdexcept>

namespace homog {

namespace {

std::vector<Complex> make_symbol_table(const Grid& grid, Scheme scheme,
                                       const WavevectorTable& table) {
  const int nq = nb_quad(scheme);
  const int d = 2 * nq;
  std::vector<Complex> symbols(static_cast<std::size_t>(grid.npts()) * d);
  for (int kk = 0; kk < grid.npts(); ++kk) {
    for (int q = 0; q < nq; ++q) {
      for (int axis = 0; axis < 2; ++axis) {
        symbols[static_cast<std::size_t>(kk) * d + 2 * q + axis] =
            symbol(scheme, axis, q, table[static_cast<std::size_t>(kk)], grid);
      }
    }
  }
  return symbols;
}

std::string k_label(const Wavevector& k) {
  std::ostringstream out;
  out << "(m_x=" << k.mx << ", m_y=" << k.my << ")";
  return out.str();
}

/**
 * A derivative symbol that vanishes at a mode (relative to the 1/spacing
 * scale of the stencil) decouples that mode from the nodal space: no
 * discrete gradient has content there and the compatible subspace is {0}.
 * The least-squares stencil does this at the corner Nyquist mode of
 * doubly-even grids. Such modes get a zero block instead of a division
 * by roundoff.
 */
bool symbol_vanishes(double denom, const Grid& grid) {
  const double scale =
      1.0 / (grid.dx() * grid.dx()) + 1.0 / (grid.dy() * grid.dy());
  return denom <= 1e-20 * scale;
}

}  // namespace

std::string to_string(Formulation form) {
  return form == Formulation::finite_strain ? "finite_strain" : "small_strain";
}

ProjectionOperator::ProjectionOperator(const Grid& grid, Scheme scheme,
                                       Formulation form)
    : grid_{grid}, scheme_{scheme}, form_{form}, nq_{nb_quad(scheme)},
      dim_{4 * nb_quad(scheme)}, wavevectors_{build_wavevectors(grid)} {
  symbols_ = make_symbol_table(grid_, scheme_, wavevectors_);
  blocks_.assign(static_cast<std::size_t>(grid_.npts()) * dim_ * dim_,
                 Complex{0.0, 0.0});
}

ProjectionOperator build_projection(const Grid& grid, Scheme scheme) {
  check_admissible(scheme, grid);
  ProjectionOperator op{grid, scheme, Formulation::finite_strain};
  const int nq = op.nq();
  const int d = 2 * nq;
  Eigen::VectorXcd deriv(d);
  for (int kk = 0; kk < grid.npts(); ++kk) {
    const Wavevector& k = op.wavevectors()[static_cast<std::size_t>(kk)];
    if (k.is_zero()) continue;  // boundary condition lives outside the operator
    for (int a = 0; a < d; ++a) deriv[a] = op.symbol_at(kk, a);
    const double denom = deriv.squaredNorm();
    if (symbol_vanishes(denom, grid)) continue;  // decoupled mode, zero block
    // g_{alpha beta} = D_alpha D*_beta / (D . D*)
    const MatrixXcd g = (deriv * deriv.adjoint()) / denom;
    auto block = op.block(kk);
    // G_{i alpha beta j} = delta_ij g_{alpha beta} on the flattened (q, i, j) layout
    for (int q = 0; q < nq; ++q)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int qp = 0; qp < nq; ++qp)
            for (int jp = 0; jp < 2; ++jp)
              block((q * 2 + i) * 2 + j, (qp * 2 + i) * 2 + jp) =
                  g(2 * q + j, 2 * qp + jp);
  }
  op.finalize();
  return op;
}

ProjectionOperator build_small_strain_projection(const Grid& grid, Scheme scheme) {
  check_admissible(scheme, grid);
  ProjectionOperator op{grid, scheme, Formulation::small_strain};
  const int nq = op.nq();
  for (int kk = 0; kk < grid.npts(); ++kk) {
    const Wavevector& k = op.wavevectors()[static_cast<std::size_t>(kk)];
    if (k.is_zero()) continue;
    // Per-element derivative vectors D_Theta and their least-squares inverse.
    std::vector<Eigen::Vector2cd> deriv(static_cast<std::size_t>(nq));
    double denom = 0.0;
    for (int t = 0; t < nq; ++t) {
      deriv[static_cast<std::size_t>(t)] =
          Eigen::Vector2cd{op.symbol_at(kk, 2 * t), op.symbol_at(kk, 2 * t + 1)};
      denom += deriv[static_cast<std::size_t>(t)].squaredNorm();
    }
    if (symbol_vanishes(denom, grid)) continue;  // decoupled mode, zero block
    std::vector<Eigen::Vector2cd> deriv_inv(static_cast<std::size_t>(nq));
    for (int t = 0; t < nq; ++t) {
      deriv_inv[static_cast<std::size_t>(t)] =
          deriv[static_cast<std::size_t>(t)].conjugate() / denom;
    }
    auto g = [&](int t, int l) -> Eigen::Matrix2cd {
      return deriv[static_cast<std::size_t>(t)] *
             deriv_inv[static_cast<std::size_t>(l)].transpose();
    };
    Eigen::Matrix2cd sum_gtt = Eigen::Matrix2cd::Zero();
    for (int t = 0; t < nq; ++t) sum_gtt += g(t, t);
    const Eigen::Matrix2cd one_plus = Eigen::Matrix2cd::Identity() + sum_gtt;
    Eigen::FullPivLU<Eigen::Matrix2cd> lu{one_plus};
    if (!lu.isInvertible()) {
      throw std::runtime_error(
          "build_small_strain_projection: singular (1 + sum g) block at k=" +
          k_label(k) + " for scheme " + to_string(scheme));
    }
    const Eigen::Matrix2cd h = lu.inverse();
    auto block = op.block(kk);
    for (int t = 0; t < nq; ++t) {
      for (int l = 0; l < nq; ++l) {
        const Eigen::Matrix2cd gtl = g(t, l);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            for (int li = 0; li < 2; ++li)
              for (int m = 0; m < 2; ++m)
                block((t * 2 + i) * 2 + j, (l * 2 + li) * 2 + m) =
                    0.5 * (gtl(i, li) * h(j, m) + gtl(i, m) * h(j, li) +
                           gtl(j, li) * h(i, m) + gtl(j, m) * h(i, li));
      }
    }
  }
  op.finalize();
  return op;
}

ProjectionOperator divergence_projection(const ProjectionOperator& op) {
  ProjectionOperator out = op;
  const int dim = out.block_dim();
  const MatrixXcd identity = MatrixXcd::Identity(dim, dim);
  for (int kk = 0; kk < out.grid().npts(); ++kk) {
    if (out.wavevectors()[static_cast<std::size_t>(kk)].is_zero()) continue;
    out.block(kk) = identity - out.block(kk);
  }
  out.finalize();
  return out;
}

void ProjectionOperator::finalize() {
  neg_index_.resize(static_cast<std::size_t>(grid_.npts()));
  for (int I = 0; I < grid_.nx; ++I)
    for (int J = 0; J < grid_.ny; ++J)
      neg_index_[static_cast<std::size_t>(I) * grid_.ny + J] =
          ((grid_.nx - I) % grid_.nx) * grid_.ny + (grid_.ny - J) % grid_.ny;
  double worst = 0.0;
  for (int kk = 0; kk < grid_.npts(); ++kk) {
    const auto b = block(kk);
    const auto bn = block(neg_index_[static_cast<std::size_t>(kk)]);
    worst = std::max(worst, (bn.conjugate() - b).cwiseAbs().maxCoeff());
  }
  hermitian_ = worst <= 1e-12;
}

TensorField ProjectionOperator::apply(const TensorField& field) const {
  TensorField out = field;
  apply_in_place(out);
  return out;
}

void ProjectionOperator::apply_in_place(TensorField& field) const {
  if (field.nx() != grid_.nx || field.ny() != grid_.ny || field.nq() != nq_) {
    throw std::invalid_argument("projection apply: field shape mismatch");
  }
  if (field.space() != FieldSpace::real_space) {
    throw std::invalid_argument("projection apply: expected real-space field");
  }
  if (hermitian_) {
    apply_packed(field);
  } else {
    apply_full(field);
  }
}

namespace {

// Hand-rolled column-major matvec on raw doubles; this sits in the
// innermost Krylov loop, where std::complex products (which guard
// against spurious overflow via a library call) are far too slow.
inline void block_matvec(const double* b, int dim, const double* xr, const double* xi,
                         double* yr, double* yi) {
  for (int r = 0; r < dim; ++r) {
    yr[r] = 0.0;
    yi[r] = 0.0;
  }
  for (int c = 0; c < dim; ++c) {
    const double ar = xr[c], ai = xi[c];
    const double* col = b + static_cast<std::size_t>(c) * dim * 2;
    for (int r = 0; r < dim; ++r) {
      const double br = col[2 * r], bi = col[2 * r + 1];
      yr[r] += br * ar - bi * ai;
      yi[r] += br * ai + bi * ar;
    }
  }
}

}  // namespace

/**
 * Fast path for Hermitian-paired blocks: a real input has a conjugate-
 * symmetric spectrum, so two tensor components ride in one complex
 * transform (component 2c in the real part, 2c+1 in the imaginary part)
 * and the output is real by construction. This halves the FFT work,
 * which dominates the solve time.
 */
void ProjectionOperator::apply_packed(TensorField& field) const {
  const int half = dim_ / 2;
  const int npts = grid_.npts();
  static thread_local std::vector<Complex> zbuf, wbuf;
  zbuf.resize(static_cast<std::size_t>(npts) * half);
  wbuf.resize(static_cast<std::size_t>(npts) * half);

  const double* fr = reinterpret_cast<const double*>(field.data());
  for (int p = 0; p < npts; ++p) {
    for (int c = 0; c < half; ++c) {
      zbuf[static_cast<std::size_t>(p) * half + c] =
          Complex{fr[(static_cast<std::size_t>(p) * dim_ + 2 * c) * 2],
                  fr[(static_cast<std::size_t>(p) * dim_ + 2 * c + 1) * 2]};
    }
  }
  fft_execute_cached(grid_.nx, grid_.ny, half, true, zbuf.data());

  double xr[16], xi[16], yr[16], yi[16];
  const double* braw = reinterpret_cast<const double*>(blocks_.data());
  for (int kk = 0; kk < npts; ++kk) {
    const int kn = neg_index_[static_cast<std::size_t>(kk)];
    const double* z = reinterpret_cast<const double*>(zbuf.data()) +
                      static_cast<std::size_t>(kk) * half * 2;
    const double* zn = reinterpret_cast<const double*>(zbuf.data()) +
                       static_cast<std::size_t>(kn) * half * 2;
    for (int c = 0; c < half; ++c) {
      const double zr = z[2 * c], zi = z[2 * c + 1];
      const double znr = zn[2 * c], zni = zn[2 * c + 1];
      xr[2 * c] = 0.5 * (zr + znr);
      xi[2 * c] = 0.5 * (zi - zni);
      xr[2 * c + 1] = 0.5 * (zi + zni);
      xi[2 * c + 1] = 0.5 * (znr - zr);
    }
    block_matvec(braw + static_cast<std::size_t>(kk) * dim_ * dim_ * 2, dim_, xr, xi,
                 yr, yi);
    double* w = reinterpret_cast<double*>(wbuf.data()) +
                static_cast<std::size_t>(kk) * half * 2;
    for (int c = 0; c < half; ++c) {
      w[2 * c] = yr[2 * c] - yi[2 * c + 1];
      w[2 * c + 1] = yi[2 * c] + yr[2 * c + 1];
    }
  }

  fft_execute_cached(grid_.nx, grid_.ny, half, false, wbuf.data());
  const double inv_n = 1.0 / npts;
  double* out = reinterpret_cast<double*>(field.data());
  const double* w = reinterpret_cast<const double*>(wbuf.data());
  for (int p = 0; p < npts; ++p) {
    for (int c = 0; c < half; ++c) {
      const std::size_t base = (static_cast<std::size_t>(p) * dim_ + 2 * c) * 2;
      out[base] = w[(static_cast<std::size_t>(p) * half + c) * 2] * inv_n;
      out[base + 1] = 0.0;
      out[base + 2] = w[(static_cast<std::size_t>(p) * half + c) * 2 + 1] * inv_n;
      out[base + 3] = 0.0;
    }
  }
}

void ProjectionOperator::apply_full(TensorField& field) const {
  const double input_norm = field.norm();
  dft_in_place(field, grid_);
  double xr[16], xi[16], yr[16], yi[16];
  const int dim = dim_;
  double* raw = reinterpret_cast<double*>(field.data());
  const double* braw = reinterpret_cast<const double*>(blocks_.data());
  for (int kk = 0; kk < grid_.npts(); ++kk) {
    double* data = raw + static_cast<std::size_t>(kk) * dim * 2;
    for (int c = 0; c < dim; ++c) {
      xr[c] = data[2 * c];
      xi[c] = data[2 * c + 1];
    }
    block_matvec(braw + static_cast<std::size_t>(kk) * dim * dim * 2, dim, xr, xi, yr,
                 yi);
    for (int r = 0; r < dim; ++r) {
      data[2 * r] = yr[r];
      data[2 * r + 1] = yi[r];
    }
  }
  idft_in_place(field, grid_);
  if (field.max_imag() > 1e-10 * std::max(input_norm, 1e-300)) {
    throw std::runtime_error(
        "projection apply: imaginary residue exceeds 1e-10 |field|; "
        "the operator does not preserve real fields on this grid");
  }
  field.truncate_imag();
}

DisplacementReconstruction reconstruct_displacement(const ProjectionOperator& op,
                                                    const TensorField& field) {
  const Grid& grid = op.grid();
  if (field.nx() != grid.nx || field.ny() != grid.ny || field.nq() != op.nq()) {
    throw std::invalid_argument("reconstruct_displacement: field shape mismatch");
  }
  const int nq = op.nq();
  const int d = 2 * nq;
  TensorField spectrum = dft(field, grid);
  VectorField u{grid.nx, grid.ny, FieldSpace::fourier_space};
  std::vector<Eigen::Matrix2d> mean(static_cast<std::size_t>(nq));
  for (int kk = 0; kk < grid.npts(); ++kk) {
    const Wavevector& k = op.wavevectors()[static_cast<std::size_t>(kk)];
    const Complex* data = spectrum.data() + static_cast<std::size_t>(kk) * nq * 4;
    if (k.is_zero()) {
      for (int q = 0; q < nq; ++q)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            mean[static_cast<std::size_t>(q)](i, j) =
                data[q * 4 + i * 2 + j].real() / grid.npts();
      continue;
    }
    double denom = 0.0;
    for (int a = 0; a < d; ++a) denom += std::norm(op.symbol_at(kk, a));
    const int I = kk / grid.ny;
    const int J = kk % grid.ny;
    if (symbol_vanishes(denom, grid)) {
      u(I, J, 0) = u(I, J, 1) = Complex{0.0, 0.0};
      continue;
    }
    for (int i = 0; i < 2; ++i) {
      Complex ui{0.0, 0.0};
      for (int q = 0; q < nq; ++q)
        for (int axis = 0; axis < 2; ++axis)
          ui += std::conj(op.symbol_at(kk, 2 * q + axis)) *
                data[q * 4 + i * 2 + axis];
      u(I, J, i) = ui / denom;
    }
  }
  VectorField fluct = idft(u, grid);
  fluct.truncate_imag();
  return {std::move(fluct), std::move(mean)};
}

TensorField gradient_field(const Grid& grid, Scheme scheme, const VectorField& chi) {
  if (chi.nx() != grid.nx || chi.ny() != grid.ny) {
    throw std::invalid_argument("gradient_field: map shape mismatch");
  }
  const int nq = nb_quad(scheme);
  const WavevectorTable table = build_wavevectors(grid);
  const std::vector<Complex> symbols = make_symbol_table(grid, scheme, table);
  VectorField spectrum = dft(chi, grid);
  TensorField grad{grid.nx, grid.ny, nq, FieldSpace::fourier_space};
  for (int kk = 0; kk < grid.npts(); ++kk) {
    const int I = kk / grid.ny;
    const int J = kk % grid.ny;
    for (int q = 0; q < nq; ++q)
      for (int i = 0; i < 2; ++i)
        for (int axis = 0; axis < 2; ++axis)
          grad(I, J, q, i, axis) =
              symbols[static_cast<std::size_t>(kk) * 2 * nq + 2 * q + axis] *
              spectrum(I, J, i);
  }
  TensorField out = idft(grad, grid);
  out.truncate_imag();
  return out;
}

}  // namespace homog
