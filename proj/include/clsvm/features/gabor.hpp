#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "clsvm/core/types.hpp"
#include "clsvm/features/image.hpp"

namespace clsvm::features {

constexpr std::size_t kGaborScales = 5;
constexpr std::size_t kGaborOrientations = 8;
constexpr std::size_t kGaborFilters = kGaborScales * kGaborOrientations;

struct GaborFilterSpec {
  double wavelength = 4.0;
  double theta = 0.0;  // direction of the carrier wave
  double sigma = 2.24;
  double aspect = 0.5;
  int radius = 14;
};

/// Filter (scale s, orientation o): wavelength 4 * sqrt(2)^s, theta o * pi / 8,
/// sigma 0.56 * wavelength, aspect 0.5, radius ceil(6 sigma).
GaborFilterSpec gabor_filter_spec(std::size_t scale, std::size_t orientation);

/// Kernel taps k(u, v) for u, v in [-radius, radius], row-major by v then u:
///   g(u, v) = exp(-(u'^2 + aspect^2 v'^2) / (2 sigma^2)) exp(i 2 pi u' / wavelength) / Z
/// with u' = u cos(theta) + v sin(theta), v' = -u sin(theta) + v cos(theta),
/// the envelope-weighted mean subtracted so the real part sums to zero, and Z
/// the envelope sum.
std::vector<std::complex<double>> gabor_kernel(const GaborFilterSpec& spec);

/// The 40-filter bank applied by zero-padded linear convolution
/// (out(p) = sum_q patch(q) k(p - q), same-size output) through FFTW.
/// Kernel spectra and FFT plans are built once; apply() is thread-safe.
class GaborBank {
 public:
  GaborBank();
  ~GaborBank();
  GaborBank(const GaborBank&) = delete;
  GaborBank& operator=(const GaborBank&) = delete;

  /// Complex responses of every filter, each 128*128 row-major, in
  /// scale-major then orientation-major order.
  std::vector<std::vector<std::complex<double>>> responses(const Image& patch) const;

  /// Magnitudes, flattened scale, orientation, row: 40 * 128 * 128 values.
  Vector magnitudes(const Image& patch) const;

  /// magnitudes() with each 128 x 128 map mean-pooled over 2 x 2 blocks:
  /// 40 * 64 * 64 values.
  Vector pooled(const Image& patch) const;

  static const GaborBank& shared();

 private:
  struct Impl;
  Impl* impl_;
};

inline Vector gabor_features(const Image& patch) { return GaborBank::shared().magnitudes(patch); }

/// 2 x 2 mean pooling of a stack of square maps stored back to back.
Vector pool_maps(const Vector& maps, std::size_t side);

}  // namespace clsvm::features
