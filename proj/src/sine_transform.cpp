#include "nlslab/sine_transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "nlslab/errors.hpp"

namespace nlslab {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct SineTransform::Impl {
  double* dst_buf = nullptr;  // size n
  double* dct_buf = nullptr;  // size n + 2
  fftw_plan dst_plan = nullptr;
  fftw_plan dct_plan = nullptr;
  mutable std::mutex exec_mutex;  // buffers are shared per instance
};

SineTransform::SineTransform(std::size_t n, double length)
    : n_(n), length_(length), impl_(std::make_unique<Impl>()) {
  if (n < 4) throw precondition_error("SineTransform: n must be >= 4");
  if (!(length > 0.0)) throw precondition_error("SineTransform: length must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->dst_buf = fftw_alloc_real(n);
  impl_->dct_buf = fftw_alloc_real(n + 2);
  impl_->dst_plan = fftw_plan_r2r_1d(static_cast<int>(n), impl_->dst_buf, impl_->dst_buf,
                                     FFTW_RODFT00, FFTW_ESTIMATE);
  impl_->dct_plan = fftw_plan_r2r_1d(static_cast<int>(n + 2), impl_->dct_buf, impl_->dct_buf,
                                     FFTW_REDFT00, FFTW_ESTIMATE);
  if (!impl_->dst_plan || !impl_->dct_plan)
    throw numerical_error("SineTransform: FFTW plan creation failed");
}

SineTransform::~SineTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (impl_->dst_plan) fftw_destroy_plan(impl_->dst_plan);
  if (impl_->dct_plan) fftw_destroy_plan(impl_->dct_plan);
  if (impl_->dst_buf) fftw_free(impl_->dst_buf);
  if (impl_->dct_buf) fftw_free(impl_->dct_buf);
}

double SineTransform::wavenumber(std::size_t m) const {
  return static_cast<double>(m) * M_PI / length_;
}

std::vector<double> SineTransform::forward(const std::vector<double>& values) const {
  if (values.size() != n_) throw precondition_error("SineTransform::forward: size mismatch");
  std::vector<double> out(n_);
  std::lock_guard<std::mutex> lock(impl_->exec_mutex);
  for (std::size_t j = 0; j < n_; ++j) impl_->dst_buf[j] = values[j];
  fftw_execute(impl_->dst_plan);
  const double scale = 1.0 / static_cast<double>(n_ + 1);
  for (std::size_t m = 0; m < n_; ++m) out[m] = scale * impl_->dst_buf[m];
  return out;
}

std::vector<double> SineTransform::inverse(const std::vector<double>& coeffs) const {
  if (coeffs.size() != n_) throw precondition_error("SineTransform::inverse: size mismatch");
  std::vector<double> out(n_);
  std::lock_guard<std::mutex> lock(impl_->exec_mutex);
  for (std::size_t m = 0; m < n_; ++m) impl_->dst_buf[m] = coeffs[m];
  fftw_execute(impl_->dst_plan);
  for (std::size_t j = 0; j < n_; ++j) out[j] = 0.5 * impl_->dst_buf[j];
  return out;
}

std::vector<double> SineTransform::derivative(const std::vector<double>& values) const {
  const auto b = forward(values);
  std::vector<double> out(n_);
  std::lock_guard<std::mutex> lock(impl_->exec_mutex);
  impl_->dct_buf[0] = 0.0;
  impl_->dct_buf[n_ + 1] = 0.0;
  for (std::size_t m = 1; m <= n_; ++m) impl_->dct_buf[m] = b[m - 1] * wavenumber(m);
  fftw_execute(impl_->dct_plan);
  for (std::size_t j = 0; j < n_; ++j) out[j] = 0.5 * impl_->dct_buf[j + 1];
  return out;
}

double SineTransform::derivative_energy(const std::vector<double>& values) const {
  const auto b = forward(values);
  double acc = 0.0;
  for (std::size_t m = 1; m <= n_; ++m) {
    const double bk = b[m - 1] * wavenumber(m);
    acc += bk * bk;
  }
  return 0.5 * length_ * acc;
}

}  // namespace nlslab
