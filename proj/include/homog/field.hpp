#ifndef HOMOG_FIELD_HPP
#define HOMOG_FIELD_HPP

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "homog/grid.hpp"

namespace homog {

using Complex = std::complex<double>;

enum class FieldSpace { real_space, fourier_space };

/**
 * Second-order tensor field of shape (nx, ny, nq, 2, 2).
 *
 * Storage is complex so the same container holds real-space fields and
 * their Fourier transforms; a real-space field is purely real. Entries
 * are laid out point-major: ((I * ny + J) * nq + q) * 4 + i * 2 + j.
 */
class TensorField {
 public:
  TensorField(int nx, int ny, int nq, FieldSpace space = FieldSpace::real_space)
      : nx_{nx}, ny_{ny}, nq_{nq}, space_{space},
        data_(static_cast<std::size_t>(nx) * ny * nq * 4, Complex{0.0, 0.0}) {
    if (nq < 1) throw std::invalid_argument("TensorField: nq must be >= 1");
  }

  static TensorField uniform(const Grid& grid, int nq, const Eigen::Matrix2d& value) {
    TensorField f(grid.nx, grid.ny, nq);
    for (int p = 0; p < grid.npts() * nq; ++p) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) f.data_[static_cast<std::size_t>(p) * 4 + i * 2 + j] = value(i, j);
    }
    return f;
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nq() const { return nq_; }
  FieldSpace space() const { return space_; }
  void set_space(FieldSpace s) { space_ = s; }

  std::size_t size() const { return data_.size(); }
  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  Complex& operator()(int I, int J, int q, int i, int j) {
    return data_[idx(I, J, q, i, j)];
  }
  Complex operator()(int I, int J, int q, int i, int j) const {
    return data_[idx(I, J, q, i, j)];
  }

  /// The (2x2) tensor at one evaluation point, real part.
  Eigen::Matrix2d tensor_at(int I, int J, int q) const {
    Eigen::Matrix2d m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = data_[idx(I, J, q, i, j)].real();
    return m;
  }

  void set_tensor(int I, int J, int q, const Eigen::Matrix2d& m) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) data_[idx(I, J, q, i, j)] = m(i, j);
  }

  /// Mean tensor over the grid at evaluation point q.
  Eigen::Matrix2d mean(int q) const {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    for (int I = 0; I < nx_; ++I)
      for (int J = 0; J < ny_; ++J) m += tensor_at(I, J, q);
    return m / (static_cast<double>(nx_) * ny_);
  }

  double max_imag() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v.imag()));
    return m;
  }

  /// Drops imaginary parts in place (after an inverse transform).
  void truncate_imag() {
    for (auto& v : data_) v = Complex{v.real(), 0.0};
  }

  double norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  bool same_shape(const TensorField& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && nq_ == o.nq_;
  }

 private:
  std::size_t idx(int I, int J, int q, int i, int j) const {
    return ((static_cast<std::size_t>(I) * ny_ + J) * nq_ + q) * 4 + i * 2 + j;
  }

  int nx_, ny_, nq_;
  FieldSpace space_;
  std::vector<Complex> data_;
};

/// Rank-1 field of shape (nx, ny, 2), used for placement and displacement maps.
class VectorField {
 public:
  VectorField(int nx, int ny, FieldSpace space = FieldSpace::real_space)
      : nx_{nx}, ny_{ny}, space_{space},
        data_(static_cast<std::size_t>(nx) * ny * 2, Complex{0.0, 0.0}) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  FieldSpace space() const { return space_; }
  void set_space(FieldSpace s) { space_ = s; }

  std::size_t size() const { return data_.size(); }
  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  Complex& operator()(int I, int J, int i) {
    return data_[(static_cast<std::size_t>(I) * ny_ + J) * 2 + i];
  }
  Complex operator()(int I, int J, int i) const {
    return data_[(static_cast<std::size_t>(I) * ny_ + J) * 2 + i];
  }

  Eigen::Vector2d vector_at(int I, int J) const {
    return {operator()(I, J, 0).real(), operator()(I, J, 1).real()};
  }

  void set_vector(int I, int J, const Eigen::Vector2d& v) {
    operator()(I, J, 0) = v[0];
    operator()(I, J, 1) = v[1];
  }

  void truncate_imag() {
    for (auto& v : data_) v = Complex{v.real(), 0.0};
  }

 private:
  int nx_, ny_;
  FieldSpace space_;
  std::vector<Complex> data_;
};

// Vector-space helpers used by the Krylov loop; all operate entrywise.

inline double dot(const TensorField& a, const TensorField& b) {
  double s = 0.0;
  const Complex* pa = a.data();
  const Complex* pb = b.data();
  for (std::size_t n = 0; n < a.size(); ++n) {
    s += pa[n].real() * pb[n].real() + pa[n].imag() * pb[n].imag();
  }
  return s;
}

inline void axpy(double alpha, const TensorField& x, TensorField& y) {
  const Complex* px = x.data();
  Complex* py = y.data();
  for (std::size_t n = 0; n < x.size(); ++n) py[n] += alpha * px[n];
}

inline void scale(double alpha, TensorField& x) {
  Complex* px = x.data();
  for (std::size_t n = 0; n < x.size(); ++n) px[n] *= alpha;
}

}  // namespace homog

#endif
