#include <doctest.h>

#include <cmath>
#include <random>

#include "homog/fft.hpp"
#include "homog/field.hpp"
#include "homog/grid.hpp"

using namespace homog;

namespace {

Eigen::Matrix2d random_tensor(std::mt19937& rng) {
  std::uniform_real_distribution<double> dist{-1.0, 1.0};
  Eigen::Matrix2d m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = dist(rng);
  return m;
}

TensorField random_field(const Grid& grid, int nq, unsigned seed) {
  std::mt19937 rng{seed};
  TensorField f{grid.nx, grid.ny, nq};
  for (int I = 0; I < grid.nx; ++I)
    for (int J = 0; J < grid.ny; ++J)
      for (int q = 0; q < nq; ++q) f.set_tensor(I, J, q, random_tensor(rng));
  return f;
}

/// Naive double-sum transform of one tensor component, for cross-checking.
Complex naive_mode(const TensorField& f, const Grid& grid, const Wavevector& k,
                   int q, int i, int j) {
  Complex sum{0.0, 0.0};
  for (int I = 0; I < grid.nx; ++I) {
    for (int J = 0; J < grid.ny; ++J) {
      const double phase = k.kx * I * grid.dx() + k.ky * J * grid.dy();
      sum += f(I, J, q, i, j) * Complex{std::cos(phase), -std::sin(phase)};
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  Grid grid{4, 6, 2.0, 3.0};
  CHECK(grid.dx() == doctest::Approx(0.5));
  CHECK(grid.dy() == doctest::Approx(0.5));
  CHECK(grid.npts() == 24);
  CHECK(grid.index(1, 2) == 8);
  CHECK_THROWS_AS(Grid(1, 4, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(4, 4, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("wavevector table, odd grid") {
  Grid grid{7, 7, 7.0, 7.0};
  const WavevectorTable table = build_wavevectors(grid);
  REQUIRE(table.size() == 49);
  int mmin = 100, mmax = -100, zeros = 0;
  for (const auto& k : table) {
    mmin = std::min(mmin, k.mx);
    mmax = std::max(mmax, k.mx);
    if (k.is_zero()) ++zeros;
    CHECK(k.kx == doctest::Approx(2.0 * M_PI * k.mx / 7.0));
  }
  CHECK(mmin == -3);
  CHECK(mmax == 3);
  CHECK(zeros == 1);
}

TEST_CASE("wavevector table, even grid carries the Nyquist mode once") {
  Grid grid{8, 8, 8.0, 8.0};
  const WavevectorTable table = build_wavevectors(grid);
  int nyquist = 0, zeros = 0, mmax = -100;
  for (const auto& k : table) {
    if (k.mx == -4 && k.my == 0) ++nyquist;
    if (k.is_zero()) ++zeros;
    mmax = std::max(mmax, k.mx);
  }
  CHECK(nyquist == 1);
  CHECK(zeros == 1);
  CHECK(mmax == 3);
  // k dx in [-pi, pi): the Nyquist value sits at -pi exactly.
  CHECK(table[4 * 8].kx == doctest::Approx(-M_PI));
}

TEST_CASE("smallest even grid") {
  Grid grid{2, 2, 1.0, 1.0};
  const WavevectorTable table = build_wavevectors(grid);
  REQUIRE(table.size() == 4);
  CHECK(table[0].kx == doctest::Approx(0.0));
  CHECK(table[grid.index(1, 0)].kx == doctest::Approx(-2.0 * M_PI));
}

TEST_CASE("constant field transforms to a single k=0 mode") {
  Grid grid{5, 4, 5.0, 4.0};
  Eigen::Matrix2d c;
  c << 1.5, -0.5, 2.0, 0.25;
  TensorField f = TensorField::uniform(grid, 1, c);
  TensorField hat = dft(f, grid);
  CHECK(hat.space() == FieldSpace::fourier_space);
  CHECK(hat(0, 0, 0, 0, 0).real() == doctest::Approx(grid.npts() * 1.5));
  CHECK(hat(0, 0, 0, 1, 0).real() == doctest::Approx(grid.npts() * 2.0));
  double off_mode = 0.0;
  for (int I = 0; I < grid.nx; ++I)
    for (int J = 0; J < grid.ny; ++J) {
      if (I == 0 && J == 0) continue;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          off_mode = std::max(off_mode, std::abs(hat(I, J, 0, i, j)));
    }
  CHECK(off_mode < 1e-12 * grid.npts());
}

TEST_CASE("round trip is the identity") {
  for (int nq : {1, 2}) {
    Grid grid{6, 5, 1.2, 0.9};
    TensorField f = random_field(grid, nq, 7u + nq);
    TensorField back = idft(dft(f, grid), grid);
    double err = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m)
      err = std::max(err, std::abs(back.data()[m] - f.data()[m]));
    CHECK(err < 1e-13);
  }
}

TEST_CASE("transform matches the naive double sum on small grids") {
  for (auto [nx, ny] : {std::pair{4, 4}, std::pair{5, 6}, std::pair{6, 3}}) {
    Grid grid{nx, ny, 1.0 * nx, 1.0 * ny};
    const WavevectorTable table = build_wavevectors(grid);
    TensorField f = random_field(grid, 1, 11u * nx + ny);
    TensorField hat = dft(f, grid);
    double err = 0.0;
    for (int I = 0; I < nx; ++I)
      for (int J = 0; J < ny; ++J)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const Complex ref = naive_mode(f, grid, table[grid.index(I, J)], 0, i, j);
            err = std::max(err, std::abs(hat(I, J, 0, i, j) - ref));
          }
    CHECK(err < 1e-12 * f.norm());
  }
}

TEST_CASE("real fields have conjugate-symmetric spectra") {
  Grid grid{4, 4, 4.0, 4.0};
  TensorField f = random_field(grid, 1, 3u);
  TensorField hat = dft(f, grid);
  double err = 0.0;
  for (int I = 0; I < 4; ++I)
    for (int J = 0; J < 4; ++J) {
      const int In = (4 - I) % 4;
      const int Jn = (4 - J) % 4;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          err = std::max(err, std::abs(hat(In, Jn, 0, i, j) -
                                       std::conj(hat(I, J, 0, i, j))));
    }
  CHECK(err < 1e-13 * f.norm());
}

TEST_CASE("Parseval identity") {
  Grid grid{7, 5, 2.0, 1.0};
  TensorField f = random_field(grid, 2, 17u);
  TensorField hat = dft(f, grid);
  double real_energy = 0.0, fourier_energy = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) {
    real_energy += std::norm(f.data()[m]);
    fourier_energy += std::norm(hat.data()[m]);
  }
  fourier_energy /= grid.npts();
  CHECK(real_energy == doctest::Approx(fourier_energy).epsilon(1e-12));
}

TEST_CASE("space flags and shape mismatches are rejected") {
  Grid grid{4, 4, 1.0, 1.0};
  TensorField f{4, 4, 1};
  TensorField hat = dft(f, grid);
  CHECK_THROWS_AS(dft(hat, grid), std::invalid_argument);
  CHECK_THROWS_AS(idft(f, grid), std::invalid_argument);
  Grid other{5, 4, 1.0, 1.0};
  CHECK_THROWS_AS(dft(f, other), std::invalid_argument);
}

TEST_CASE("vector field transforms round trip") {
  Grid grid{5, 7, 1.0, 1.4};
  std::mt19937 rng{23};
  std::uniform_real_distribution<double> dist{-1.0, 1.0};
  VectorField u{5, 7};
  for (int I = 0; I < 5; ++I)
    for (int J = 0; J < 7; ++J) u.set_vector(I, J, {dist(rng), dist(rng)});
  VectorField back = idft(dft(u, grid), grid);
  double err = 0.0;
  for (std::size_t m = 0; m < u.size(); ++m)
    err = std::max(err, std::abs(back.data()[m] - u.data()[m]));
  CHECK(err < 1e-13);
}

TEST_CASE("scalar transform matches the tensor path") {
  Grid grid{5, 4, 5.0, 4.0};
  std::mt19937 rng{5};
  std::uniform_real_distribution<double> dist{-1.0, 1.0};
  std::vector<double> values(static_cast<std::size_t>(grid.npts()));
  TensorField f{grid.nx, grid.ny, 1};
  for (int I = 0; I < grid.nx; ++I)
    for (int J = 0; J < grid.ny; ++J) {
      const double v = dist(rng);
      values[static_cast<std::size_t>(grid.index(I, J))] = v;
      f(I, J, 0, 0, 0) = v;
    }
  const std::vector<Complex> spectrum = dft_scalar(values, grid);
  TensorField hat = dft(f, grid);
  double err = 0.0;
  for (int I = 0; I < grid.nx; ++I)
    for (int J = 0; J < grid.ny; ++J)
      err = std::max(err, std::abs(spectrum[static_cast<std::size_t>(grid.index(I, J))] -
                                   hat(I, J, 0, 0, 0)));
  CHECK(err < 1e-13);
}
