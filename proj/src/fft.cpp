#include "homog/fft.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <fftw3.h>

namespace homog {

namespace {

// One cached batched plan per (nx, ny, ncomp, sign). Plans are created
// once with FFTW_MEASURE (prime-sized grids are very slow under estimate
// heuristics) on a scratch array and re-executed on caller memory; the
// FFTW_UNALIGNED flag makes that safe for arbitrary allocations.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  // In-place transform of all ncomp interleaved components at once.
  void execute(int nx, int ny, int ncomp, int sign, Complex* data) {
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock{mutex_};
      auto key = std::make_tuple(nx, ny, ncomp, sign);
      auto it = plans_.find(key);
      if (it == plans_.end()) {
        const std::size_t n = static_cast<std::size_t>(nx) * ny * ncomp;
        fftw_complex* scratch =
            static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        int sizes[2] = {nx, ny};
        fftw_plan p = fftw_plan_many_dft(2, sizes, ncomp, scratch, nullptr, ncomp, 1,
                                         scratch, nullptr, ncomp, 1, sign,
                                         FFTW_MEASURE | FFTW_UNALIGNED);
        fftw_free(scratch);
        if (p == nullptr) throw std::runtime_error("fftw planning failed");
        it = plans_.emplace(key, p).first;
      }
      plan = it->second;
    }
    fftw_complex* raw = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, raw, raw);
  }

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int>, fftw_plan> plans_;
};

template <typename Field>
void transform_components(Field& field, const Grid& grid, int sign, int ncomp) {
  PlanCache::instance().execute(grid.nx, grid.ny, ncomp, sign, field.data());
  if (sign == FFTW_BACKWARD) {
    const double inv_n = 1.0 / grid.npts();
    Complex* data = field.data();
    const std::size_t n = static_cast<std::size_t>(grid.npts()) * ncomp;
    for (std::size_t m = 0; m < n; ++m) data[m] *= inv_n;
  }
}

void check_shape(int fnx, int fny, const Grid& grid) {
  if (fnx != grid.nx || fny != grid.ny) {
    throw std::invalid_argument("dft: field shape does not match grid");
  }
}

}  // namespace

TensorField dft(const TensorField& field, const Grid& grid) {
  TensorField out = field;
  dft_in_place(out, grid);
  return out;
}

TensorField idft(const TensorField& field, const Grid& grid) {
  TensorField out = field;
  idft_in_place(out, grid);
  return out;
}

void fft_execute_cached(int nx, int ny, int ncomp, bool forward, Complex* data) {
  PlanCache::instance().execute(nx, ny, ncomp, forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                data);
}

void dft_in_place(TensorField& field, const Grid& grid) {
  check_shape(field.nx(), field.ny(), grid);
  if (field.space() != FieldSpace::real_space) {
    throw std::invalid_argument("dft: field is already in Fourier space");
  }
  transform_components(field, grid, FFTW_FORWARD, field.nq() * 4);
  field.set_space(FieldSpace::fourier_space);
}

void idft_in_place(TensorField& field, const Grid& grid) {
  check_shape(field.nx(), field.ny(), grid);
  if (field.space() != FieldSpace::fourier_space) {
    throw std::invalid_argument("idft: field is already in real space");
  }
  transform_components(field, grid, FFTW_BACKWARD, field.nq() * 4);
  field.set_space(FieldSpace::real_space);
}

VectorField dft(const VectorField& field, const Grid& grid) {
  check_shape(field.nx(), field.ny(), grid);
  if (field.space() != FieldSpace::real_space) {
    throw std::invalid_argument("dft: field is already in Fourier space");
  }
  VectorField out = field;
  transform_components(out, grid, FFTW_FORWARD, 2);
  out.set_space(FieldSpace::fourier_space);
  return out;
}

VectorField idft(const VectorField& field, const Grid& grid) {
  check_shape(field.nx(), field.ny(), grid);
  if (field.space() != FieldSpace::fourier_space) {
    throw std::invalid_argument("idft: field is already in real space");
  }
  VectorField out = field;
  transform_components(out, grid, FFTW_BACKWARD, 2);
  out.set_space(FieldSpace::real_space);
  return out;
}

std::vector<Complex> dft_scalar(const std::vector<double>& values, const Grid& grid) {
  if (values.size() != static_cast<std::size_t>(grid.npts())) {
    throw std::invalid_argument("dft_scalar: value count does not match grid");
  }
  std::vector<Complex> buffer(values.begin(), values.end());
  PlanCache::instance().execute(grid.nx, grid.ny, 1, FFTW_FORWARD, buffer.data());
  return buffer;
}

}  // namespace homog
