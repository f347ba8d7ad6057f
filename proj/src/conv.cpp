#include "tdflow/conv.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "tdflow/error.hpp"

namespace tdflow {
namespace {

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : ptr(fftw_alloc_real(n)) {
    if (!ptr) throw std::bad_alloc();
  }
  ~RealBuffer() { fftw_free(ptr); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* ptr;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {
    if (!ptr) throw std::bad_alloc();
  }
  ~ComplexBuffer() { fftw_free(ptr); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* ptr;
};

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [shape, plans] : plans_) {
      fftw_destroy_plan(plans.forward);
      fftw_destroy_plan(plans.backward);
    }
  }

  PlanPair get(int rows, int cols) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({rows, cols});
    if (it != plans_.end()) return it->second;
    const std::size_t n = std::size_t(rows) * cols;
    const std::size_t nc = std::size_t(rows) * (cols / 2 + 1);
    RealBuffer real(n);
    ComplexBuffer spec(nc);
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_2d(rows, cols, real.ptr, spec.ptr, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_2d(rows, cols, spec.ptr, real.ptr, FFTW_ESTIMATE);
    if (!p.forward || !p.backward) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(std::pair{rows, cols}, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// Periodic heat flow on a rows x cols lattice of spacing h, in place.
void periodic_heat(std::vector<double>& data, int rows, int cols, double h, double tau) {
  const PlanPair plans = plan_cache().get(rows, cols);
  const std::size_t n = std::size_t(rows) * cols;
  const int half = cols / 2 + 1;
  RealBuffer real(n);
  ComplexBuffer spec(std::size_t(rows) * half);
  std::copy(data.begin(), data.end(), real.ptr);
  fftw_execute_dft_r2c(plans.forward, real.ptr, spec.ptr);

  const double two_pi = 2.0 * std::numbers::pi;
  const double kx0 = two_pi / (cols * h);
  const double ky0 = two_pi / (rows * h);
  const double scale = 1.0 / double(n);
  for (int r = 0; r < rows; ++r) {
    const int rw = (r <= rows / 2) ? r : r - rows;
    const double ky = rw * ky0;
    for (int m = 0; m < half; ++m) {
      const double kx = m * kx0;
      const double symbol = std::exp(-tau * (kx * kx + ky * ky)) * scale;
      fftw_complex& c = spec.ptr[std::size_t(r) * half + m];
      c[0] *= symbol;
      c[1] *= symbol;
    }
  }
  fftw_execute_dft_c2r(plans.backward, spec.ptr, real.ptr);
  std::copy(real.ptr, real.ptr + n, data.begin());
}

void check_inputs(const NodalScalarField& field, double tau, const char* who) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ArgumentError(std::string(who) + ": tau must be positive and finite");
  }
  for (double v : field.values()) {
    if (!std::isfinite(v)) throw ArgumentError(std::string(who) + ": non-finite input value");
  }
}

}  // namespace

NodalScalarField gaussian_convolve(const NodalScalarField& field, double tau, ConvBoundary boundary) {
  check_inputs(field, tau, "gaussian_convolve");
  const int rows = field.rows();
  const int cols = field.cols();
  const double h = field.grid().h();

  if (boundary == ConvBoundary::periodic) {
    std::vector<double> data(field.values().begin(), field.values().end());
    periodic_heat(data, rows, cols, h, tau);
    return NodalScalarField(field.grid(), std::move(data));
  }

  const int er = 2 * rows - 2;
  const int ec = 2 * cols - 2;
  auto reflect = [](int k, int n) { return k < n ? k : 2 * n - 2 - k; };
  std::vector<double> ext(std::size_t(er) * ec);
  for (int r = 0; r < er; ++r) {
    for (int c = 0; c < ec; ++c) ext[std::size_t(r) * ec + c] = field(reflect(c, cols), reflect(r, rows));
  }
  periodic_heat(ext, er, ec, h, tau);
  NodalScalarField out(field.grid());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out(c, r) = ext[std::size_t(r) * ec + c];
  }
  return out;
}

namespace {

// Periodized sampled 1D Gaussian exp(-x^2 / (4 tau)) at lattice offsets,
// normalized to unit sum.
std::vector<double> periodic_weights(int n, double h, double tau) {
  const double period = n * h;
  const double reach = std::sqrt(4.0 * tau * 50.0) + period;
  const int images = int(std::ceil(reach / period)) + 1;
  std::vector<double> w(n, 0.0);
  for (int d = 0; d < n; ++d) {
    double s = 0.0;
    for (int p = -images; p <= images; ++p) {
      const double x = d * h + p * period;
      s += std::exp(-x * x / (4.0 * tau));
    }
    w[d] = s;
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

NodalScalarField direct_convolve_oracle(const NodalScalarField& field, double tau) {
  check_inputs(field, tau, "direct_convolve_oracle");
  const int rows = field.rows();
  const int cols = field.cols();
  if (rows > 64 || cols > 64) {
    throw ArgumentError("direct_convolve_oracle: lattice larger than 64x64 refused");
  }
  const double h = field.grid().h();
  const auto wx = periodic_weights(cols, h, tau);
  const auto wy = periodic_weights(rows, h, tau);
  NodalScalarField out(field.grid());
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      double s = 0.0;
      for (int jj = 0; jj < rows; ++jj) {
        const double wj = wy[(j - jj + rows) % rows];
        for (int ii = 0; ii < cols; ++ii) s += wj * wx[(i - ii + cols) % cols] * field(ii, jj);
      }
      out(i, j) = s;
    }
  }
  return out;
}

}  // namespace tdflow
