#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace nlslab {

/// DST-I / DCT-I pair for Dirichlet problems on (0, L): w(r) = sum_m b_m
/// sin(m pi r / L) over the n interior nodes. Plans are created once per
/// instance; execution is in-place on caller buffers and thread-safe. Each
/// evolution/analysis context owns its own instance (FFTW plan creation is
/// serialized internally by a global mutex).
class SineTransform {
 public:
  SineTransform(std::size_t n, double length);
  ~SineTransform();

  SineTransform(const SineTransform&) = delete;
  SineTransform& operator=(const SineTransform&) = delete;

  std::size_t size() const { return n_; }
  double length() const { return length_; }

  /// Sine coefficient b_m (m = 1..n) of the sampled values, normalized so
  /// that values == sum_m b_m sin(m pi r_j / L).
  std::vector<double> forward(const std::vector<double>& values) const;
  std::vector<double> inverse(const std::vector<double>& coeffs) const;

  /// d/dr evaluated at the interior nodes from the sine series (the
  /// derivative is a cosine series, evaluated with a DCT-I).
  std::vector<double> derivative(const std::vector<double>& values) const;

  /// integral( w'(r)^2, 0..L ) by Parseval; exact for the interpolating
  /// sine series.
  double derivative_energy(const std::vector<double>& values) const;

  /// Wavenumber of mode m (1-based): m pi / L.
  double wavenumber(std::size_t m) const;

 private:
  struct Impl;
  std::size_t n_;
  double length_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nlslab
