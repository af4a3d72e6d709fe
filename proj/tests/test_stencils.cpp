#include <doctest.h>

#include <cmath>
#include <random>

#include "homog/grid.hpp"
#include "homog/stencils.hpp"

using namespace homog;

namespace {

using Complex = std::complex<double>;

Wavevector make_k(double kx, double ky) {
  // The mode numbers only matter for the zero test; any nonzero pair works.
  return {kx, ky, kx == 0.0 && ky == 0.0 ? 0 : 1, 0};
}

/// Amplitude read off a plane wave pushed through the real-space taps.
Complex stencil_symbol(const Stencil& s, const Wavevector& k, const Grid& grid) {
  Complex sum{0.0, 0.0};
  for (const Tap& tap : s.taps) {
    const double phase = k.kx * tap.di * grid.dx() + k.ky * tap.dj * grid.dy();
    sum += tap.coeff * Complex{std::cos(phase), std::sin(phase)};
  }
  return sum / grid.spacing(s.axis);
}

/// Least-squares fit of an affine map to the four corners, solved from the
/// normal equations over (F, translation) — an independent check of the
/// closed form.
Eigen::Matrix2d brute_force_gradient(const std::array<Eigen::Vector2d, 4>& corners,
                                     const Grid& grid) {
  const std::array<Eigen::Vector2d, 4> r = {
      Eigen::Vector2d{0.0, 0.0}, Eigen::Vector2d{grid.dx(), 0.0},
      Eigen::Vector2d{0.0, grid.dy()}, Eigen::Vector2d{grid.dx(), grid.dy()}};
  // Unknowns per displacement row i: (F_i0, F_i1, psi_i).
  Eigen::MatrixXd design(4, 3);
  for (int c = 0; c < 4; ++c) design.row(c) << r[c][0], r[c][1], 1.0;
  Eigen::Matrix2d f;
  for (int i = 0; i < 2; ++i) {
    Eigen::Vector4d rhs;
    for (int c = 0; c < 4; ++c) rhs[c] = corners[c][i];
    const Eigen::Vector3d sol = design.colPivHouseholderQr().solve(rhs);
    f(i, 0) = sol[0];
    f(i, 1) = sol[1];
  }
  return f;
}

}  // namespace

TEST_CASE("scheme bookkeeping") {
  CHECK(nb_quad(Scheme::fourier) == 1);
  CHECK(nb_quad(Scheme::fe_linear) == 2);
  CHECK(nb_quad(Scheme::fourier_two_point) == 2);
  CHECK(parse_scheme("least_squares") == Scheme::least_squares);
  CHECK(to_string(Scheme::central) == "central");
  CHECK_THROWS_AS(parse_scheme("unknown"), std::invalid_argument);
  CHECK(all_schemes().size() == 6);
  CHECK(has_taps(Scheme::forward));
  CHECK(!has_taps(Scheme::fourier));
  CHECK(!has_taps(Scheme::fourier_two_point));
}

TEST_CASE("even-grid admissibility") {
  CHECK(!even_grid_safe(Scheme::fourier));
  CHECK(!even_grid_safe(Scheme::central));
  CHECK(even_grid_safe(Scheme::forward));
  CHECK(even_grid_safe(Scheme::least_squares));
  CHECK(even_grid_safe(Scheme::fe_linear));
  CHECK(even_grid_safe(Scheme::fourier_two_point));
  Grid even{8, 8, 1.0, 1.0};
  Grid odd{7, 7, 1.0, 1.0};
  CHECK_THROWS_AS(check_admissible(Scheme::central, even), std::invalid_argument);
  CHECK_THROWS_AS(check_admissible(Scheme::fourier, even), std::invalid_argument);
  CHECK_NOTHROW(check_admissible(Scheme::central, odd));
  CHECK_NOTHROW(check_admissible(Scheme::forward, even));
}

TEST_CASE("symbol point values") {
  Grid grid{8, 8, 8.0, 8.0};  // unit spacing
  // Central differences vanish at the Nyquist frequency.
  CHECK(std::abs(symbol(Scheme::central, 0, 0, make_k(M_PI, 0.0), grid)) < 1e-15);
  // Forward differences at the Nyquist frequency: (e^{i pi} - 1) = -2.
  const Complex fd = symbol(Scheme::forward, 0, 0, make_k(-M_PI, 0.0), grid);
  CHECK(fd.real() == doctest::Approx(-2.0));
  CHECK(std::abs(fd.imag()) < 1e-15);
  // Central at k dx = pi/2: i sin(pi/2) = i.
  const Complex cd = symbol(Scheme::central, 0, 0, make_k(M_PI / 2.0, 0.0), grid);
  CHECK(cd.real() == doctest::Approx(0.0));
  CHECK(cd.imag() == doctest::Approx(1.0));
  // Every scheme annihilates constants.
  for (Scheme scheme : all_schemes()) {
    for (int q = 0; q < nb_quad(scheme); ++q)
      for (int axis = 0; axis < 2; ++axis)
        CHECK(std::abs(symbol(scheme, axis, q, make_k(0.0, 0.0), grid)) == 0.0);
  }
  // Fourier scheme is the exact multiplier i k.
  const Complex fs = symbol(Scheme::fourier, 1, 0, make_k(0.3, 0.7), grid);
  CHECK(fs.real() == doctest::Approx(0.0));
  CHECK(fs.imag() == doctest::Approx(0.7));
}

TEST_CASE("evaluation-point index is validated") {
  Grid grid{8, 8, 8.0, 8.0};
  CHECK_THROWS_AS(symbol(Scheme::forward, 0, 1, make_k(0.1, 0.0), grid),
                  std::out_of_range);
  CHECK_THROWS_AS(symbol(Scheme::fe_linear, 0, 2, make_k(0.1, 0.0), grid),
                  std::out_of_range);
}

TEST_CASE("tap tables") {
  auto find = [](const std::vector<Stencil>& table, int axis, int quad) {
    for (const Stencil& s : table)
      if (s.axis == axis && s.quad == quad) return s;
    throw std::logic_error("stencil not found");
  };
  auto coeff = [](const Stencil& s, int di, int dj) {
    for (const Tap& t : s.taps)
      if (t.di == di && t.dj == dj) return t.coeff;
    return 0.0;
  };

  const auto fd = stencil_table(Scheme::forward);
  const Stencil fdx = find(fd, 0, 0);
  CHECK(fdx.taps.size() == 2);
  CHECK(coeff(fdx, 0, 0) == doctest::Approx(-1.0));
  CHECK(coeff(fdx, 1, 0) == doctest::Approx(1.0));

  const auto ls = stencil_table(Scheme::least_squares);
  const Stencil lsx = find(ls, 0, 0);
  CHECK(lsx.taps.size() == 4);
  CHECK(coeff(lsx, 0, 0) == doctest::Approx(-0.5));
  CHECK(coeff(lsx, 1, 0) == doctest::Approx(0.5));
  CHECK(coeff(lsx, 0, 1) == doctest::Approx(-0.5));
  CHECK(coeff(lsx, 1, 1) == doctest::Approx(0.5));

  const auto fe = stencil_table(Scheme::fe_linear);
  const Stencil fe1y = find(fe, 1, 1);
  CHECK(fe1y.taps.size() == 2);
  CHECK(coeff(fe1y, 1, 0) == doctest::Approx(-1.0));
  CHECK(coeff(fe1y, 1, 1) == doctest::Approx(1.0));

  // Coefficients of every stencil sum to zero.
  for (Scheme scheme : {Scheme::central, Scheme::forward, Scheme::least_squares,
                        Scheme::fe_linear}) {
    for (const Stencil& s : stencil_table(scheme)) {
      double sum = 0.0;
      for (const Tap& t : s.taps) sum += t.coeff;
      CHECK(std::abs(sum) < 1e-15);
    }
  }

  CHECK_THROWS_AS(stencil_table(Scheme::fourier), std::invalid_argument);
  CHECK_THROWS_AS(stencil_table(Scheme::fourier_two_point), std::invalid_argument);
}

TEST_CASE("symbols agree with the real-space taps on plane waves") {
  for (auto [nx, ny] : {std::pair{5, 5}, std::pair{6, 6}, std::pair{5, 6}}) {
    Grid grid{nx, ny, 1.3 * nx, 0.7 * ny};
    const WavevectorTable table = build_wavevectors(grid);
    for (Scheme scheme : {Scheme::central, Scheme::forward, Scheme::least_squares,
                          Scheme::fe_linear}) {
      const auto stencils = stencil_table(scheme);
      for (const Stencil& s : stencils) {
        double err = 0.0;
        for (const Wavevector& k : table) {
          err = std::max(err, std::abs(stencil_symbol(s, k, grid) -
                                       symbol(scheme, s.axis, s.quad, k, grid)));
        }
        CHECK(err < 1e-13);
      }
    }
  }
}

TEST_CASE("central differences carry the Lanczos sigma factor") {
  Grid grid{9, 9, 9.0, 9.0};
  for (const Wavevector& k : build_wavevectors(grid)) {
    if (k.mx == 0) continue;
    const Complex cd = symbol(Scheme::central, 0, 0, k, grid);
    const double sigma = std::sin(k.kx * grid.dx()) / (k.kx * grid.dx());
    CHECK(std::abs(cd - Complex{0.0, k.kx} * sigma) < 1e-14);
  }
}

TEST_CASE("element-1 symbol equals forward differences, least squares their mean") {
  Grid grid{6, 7, 1.9, 1.1};
  for (const Wavevector& k : build_wavevectors(grid)) {
    for (int axis = 0; axis < 2; ++axis) {
      const Complex fd = symbol(Scheme::forward, axis, 0, k, grid);
      const Complex e1 = symbol(Scheme::fe_linear, axis, 0, k, grid);
      const Complex e2 = symbol(Scheme::fe_linear, axis, 1, k, grid);
      const Complex ls = symbol(Scheme::least_squares, axis, 0, k, grid);
      CHECK(std::abs(e1 - fd) < 1e-15 * std::max(1.0, std::abs(fd)));
      CHECK(std::abs(ls - 0.5 * (e1 + e2)) < 1e-14 * std::max(1.0, std::abs(ls)));
    }
  }
}

TEST_CASE("shifted Fourier derivative: i k times opposite sixth-voxel phases") {
  Grid grid{7, 7, 2.1, 1.4};
  for (const Wavevector& k : build_wavevectors(grid)) {
    if (k.is_zero()) continue;
    const double shift = (k.kx * grid.dx() + k.ky * grid.dy()) / 6.0;
    for (int axis = 0; axis < 2; ++axis) {
      const Complex ik{0.0, k.k(axis)};
      const Complex q0 = symbol(Scheme::fourier_two_point, axis, 0, k, grid);
      const Complex q1 = symbol(Scheme::fourier_two_point, axis, 1, k, grid);
      CHECK(std::abs(q0 - ik * std::exp(Complex{0.0, -shift})) < 1e-14);
      CHECK(std::abs(q1 - ik * std::exp(Complex{0.0, shift})) < 1e-14);
      // Phases cancel pairwise; tolerance relative to |k|^2.
      CHECK(std::abs(q0 * q1 - ik * ik) < 1e-14 * std::max(1.0, std::norm(ik)));
    }
  }
}

TEST_CASE("closed-form voxel gradient") {
  Grid grid{4, 4, 4.0 * 1.5, 4.0 * 0.5};  // dx = 1.5, dy = 0.5
  std::mt19937 rng{31};
  std::uniform_real_distribution<double> dist{-1.0, 1.0};

  SUBCASE("affine corner data is reproduced exactly") {
    Eigen::Matrix2d a;
    a << 0.3, -1.2, 0.8, 0.1;
    const std::array<Eigen::Vector2d, 4> r = {
        Eigen::Vector2d{0.0, 0.0}, Eigen::Vector2d{grid.dx(), 0.0},
        Eigen::Vector2d{0.0, grid.dy()}, Eigen::Vector2d{grid.dx(), grid.dy()}};
    std::array<Eigen::Vector2d, 4> corners;
    for (int c = 0; c < 4; ++c) corners[c] = a * r[c];
    CHECK((least_squares_gradient(corners, grid) - a).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("single displaced corner splits evenly") {
    Grid unit{4, 4, 4.0, 4.0};
    const double delta = 0.37;
    std::array<Eigen::Vector2d, 4> corners = {
        Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
        Eigen::Vector2d{delta, 0.0}};
    const Eigen::Matrix2d f = least_squares_gradient(corners, unit);
    CHECK(f(0, 0) == doctest::Approx(delta / 2.0));
    CHECK(f(0, 1) == doctest::Approx(delta / 2.0));
    CHECK(f(1, 0) == doctest::Approx(0.0));
    CHECK(f(1, 1) == doctest::Approx(0.0));
  }

  SUBCASE("rigid translation adds no gradient") {
    const Eigen::Vector2d t{0.4, -2.0};
    std::array<Eigen::Vector2d, 4> corners = {t, t, t, t};
    CHECK(least_squares_gradient(corners, grid).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("matches the normal-equation minimizer on random corners") {
    for (int trial = 0; trial < 20; ++trial) {
      std::array<Eigen::Vector2d, 4> corners;
      for (auto& c : corners) c = Eigen::Vector2d{dist(rng), dist(rng)};
      const Eigen::Matrix2d closed = least_squares_gradient(corners, grid);
      const Eigen::Matrix2d fitted = brute_force_gradient(corners, grid);
      CHECK((closed - fitted).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}
