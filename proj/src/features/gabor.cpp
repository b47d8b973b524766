#include "clsvm/features/gabor.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "clsvm/core/error.hpp"
#include "clsvm/features/boxes.hpp"

namespace clsvm::features {

namespace {

constexpr std::size_t kFftSide = 256;
constexpr std::size_t kFftSize = kFftSide * kFftSide;

// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

void check_patch(const Image& patch) {
  if (patch.width != kPatchSize || patch.height != kPatchSize) {
    throw ValidationError("gabor: patch must be 128x128");
  }
}

}  // namespace

GaborFilterSpec gabor_filter_spec(std::size_t scale, std::size_t orientation) {
  if (scale >= kGaborScales || orientation >= kGaborOrientations) throw ValidationError("gabor: filter index out of range");
  GaborFilterSpec s;
  s.wavelength = 4.0 * std::pow(std::numbers::sqrt2, static_cast<double>(scale));
  s.theta = static_cast<double>(orientation) * std::numbers::pi / 8.0;
  s.sigma = 0.56 * s.wavelength;
  s.aspect = 0.5;
  s.radius = static_cast<int>(std::ceil(6.0 * s.sigma));
  return s;
}

std::vector<std::complex<double>> gabor_kernel(const GaborFilterSpec& spec) {
  const int r = spec.radius;
  const auto side = static_cast<std::size_t>(2 * r + 1);
  std::vector<std::complex<double>> k(side * side);
  std::vector<double> envelope(side * side);
  const double c = std::cos(spec.theta);
  const double s = std::sin(spec.theta);
  double env_sum = 0.0;
  std::complex<double> weighted_carrier = 0.0;
  for (int v = -r; v <= r; ++v) {
    for (int u = -r; u <= r; ++u) {
      const double up = u * c + v * s;
      const double vp = -u * s + v * c;
      const double e = std::exp(-(up * up + spec.aspect * spec.aspect * vp * vp) / (2.0 * spec.sigma * spec.sigma));
      const std::complex<double> carrier = std::polar(1.0, 2.0 * std::numbers::pi * up / spec.wavelength);
      const std::size_t idx = static_cast<std::size_t>(v + r) * side + static_cast<std::size_t>(u + r);
      envelope[idx] = e;
      k[idx] = carrier;
      env_sum += e;
      weighted_carrier += e * carrier;
    }
  }
  const double dc = weighted_carrier.real() / env_sum;
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = envelope[i] * (k[i] - dc) / env_sum;
  return k;
}

struct GaborBank::Impl {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<std::vector<std::complex<double>>> spectra;  // kFftSize each
};

GaborBank::GaborBank() : impl_(new Impl) {
  FftwBuffer in(kFftSize), out(kFftSize);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->forward = fftw_plan_dft_2d(kFftSide, kFftSide, in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->backward = fftw_plan_dft_2d(kFftSide, kFftSide, in.data, out.data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  impl_->spectra.reserve(kGaborFilters);
  for (std::size_t sc = 0; sc < kGaborScales; ++sc) {
    for (std::size_t o = 0; o < kGaborOrientations; ++o) {
      const GaborFilterSpec spec = gabor_filter_spec(sc, o);
      const auto taps = gabor_kernel(spec);
      const int r = spec.radius;
      const auto side = static_cast<std::size_t>(2 * r + 1);
      for (std::size_t i = 0; i < kFftSize; ++i) in.data[i][0] = in.data[i][1] = 0.0;
      // Offset (u, v) lands at ((v mod N), (u mod N)) so the circular product
      // reproduces linear convolution for offsets within +-127.
      for (int v = -r; v <= r; ++v) {
        for (int u = -r; u <= r; ++u) {
          const auto row = static_cast<std::size_t>((v + static_cast<int>(kFftSide)) % static_cast<int>(kFftSide));
          const auto col = static_cast<std::size_t>((u + static_cast<int>(kFftSide)) % static_cast<int>(kFftSide));
          const auto& t = taps[static_cast<std::size_t>(v + r) * side + static_cast<std::size_t>(u + r)];
          in.data[row * kFftSide + col][0] = t.real();
          in.data[row * kFftSide + col][1] = t.imag();
        }
      }
      fftw_execute_dft(impl_->forward, in.data, out.data);
      std::vector<std::complex<double>> spectrum(kFftSize);
      for (std::size_t i = 0; i < kFftSize; ++i) spectrum[i] = {out.data[i][0], out.data[i][1]};
      impl_->spectra.push_back(std::move(spectrum));
    }
  }
}

GaborBank::~GaborBank() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(impl_->forward);
    fftw_destroy_plan(impl_->backward);
  }
  delete impl_;
}

const GaborBank& GaborBank::shared() {
  static const GaborBank bank;
  return bank;
}

std::vector<std::vector<std::complex<double>>> GaborBank::responses(const Image& patch) const {
  check_patch(patch);
  FftwBuffer in(kFftSize), out(kFftSize), prod(kFftSize);
  for (std::size_t i = 0; i < kFftSize; ++i) in.data[i][0] = in.data[i][1] = 0.0;
  for (std::size_t y = 0; y < kPatchSize; ++y) {
    for (std::size_t x = 0; x < kPatchSize; ++x) in.data[y * kFftSide + x][0] = patch.at(x, y);
  }
  fftw_execute_dft(impl_->forward, in.data, out.data);
  const double scale = 1.0 / static_cast<double>(kFftSize);
  std::vector<std::vector<std::complex<double>>> result;
  result.reserve(kGaborFilters);
  for (const auto& spectrum : impl_->spectra) {
    for (std::size_t i = 0; i < kFftSize; ++i) {
      const std::complex<double> p = std::complex<double>(out.data[i][0], out.data[i][1]) * spectrum[i];
      prod.data[i][0] = p.real();
      prod.data[i][1] = p.imag();
    }
    fftw_execute_dft(impl_->backward, prod.data, in.data);
    std::vector<std::complex<double>> map(kPatchSize * kPatchSize);
    for (std::size_t y = 0; y < kPatchSize; ++y) {
      for (std::size_t x = 0; x < kPatchSize; ++x) {
        const auto& c = in.data[y * kFftSide + x];
        map[y * kPatchSize + x] = {c[0] * scale, c[1] * scale};
      }
    }
    result.push_back(std::move(map));
  }
  return result;
}

Vector GaborBank::magnitudes(const Image& patch) const {
  const auto maps = responses(patch);
  const std::size_t per = kPatchSize * kPatchSize;
  Vector out(static_cast<Eigen::Index>(kGaborFilters * per));
  for (std::size_t f = 0; f < kGaborFilters; ++f) {
    for (std::size_t i = 0; i < per; ++i) out(static_cast<Eigen::Index>(f * per + i)) = std::abs(maps[f][i]);
  }
  return out;
}

Vector GaborBank::pooled(const Image& patch) const { return pool_maps(magnitudes(patch), kPatchSize); }

Vector pool_maps(const Vector& maps, std::size_t side) {
  const std::size_t per = side * side;
  if (side % 2 != 0 || per == 0 || static_cast<std::size_t>(maps.size()) % per != 0) {
    throw ValidationError("pool_maps: size must be a multiple of an even square");
  }
  const std::size_t count = static_cast<std::size_t>(maps.size()) / per;
  const std::size_t half = side / 2;
  Vector out(static_cast<Eigen::Index>(count * half * half));
  for (std::size_t f = 0; f < count; ++f) {
    const std::size_t base = f * per;
    for (std::size_t y = 0; y < half; ++y) {
      for (std::size_t x = 0; x < half; ++x) {
        const auto at = [&](std::size_t xx, std::size_t yy) { return maps(static_cast<Eigen::Index>(base + yy * side + xx)); };
        out(static_cast<Eigen::Index>(f * half * half + y * half + x)) =
            0.25 * (at(2 * x, 2 * y) + at(2 * x + 1, 2 * y) + at(2 * x, 2 * y + 1) + at(2 * x + 1, 2 * y + 1));
      }
    }
  }
  return out;
}

}  // namespace clsvm::features
