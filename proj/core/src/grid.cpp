// SPDX-License-Identifier: Apache-2.0
#include "hexwave/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

#include "hexwave/error.hpp"

namespace hexwave {

SpectralGrid::SpectralGrid(Vec2 origin, Vec2 a1, Vec2 a2, int n1, int n2)
    : origin_(std::move(origin)), a1_(std::move(a1)), a2_(std::move(a2)), n1_(n1), n2_(n2) {
  if (n1 < 1 || n2 < 1) throw InvalidArgument("grid dimensions must be positive");
  Mat2 a;
  a.col(0) = a1_;
  a.col(1) = a2_;
  if (std::abs(a.determinant()) <= 0.0) throw InvalidArgument("degenerate grid cell");
  const Mat2 b = 2.0 * kPi * a.inverse().transpose();
  b1_ = b.col(0);
  b2_ = b.col(1);
}

Vec2 SpectralGrid::point(int i1, int i2) const {
  return origin_ + (static_cast<double>(i1) / n1_) * a1_ + (static_cast<double>(i2) / n2_) * a2_;
}

Vec2 SpectralGrid::wavevector(int i1, int i2) const {
  return static_cast<double>(signed_frequency(i1, n1_)) * b1_ +
         static_cast<double>(signed_frequency(i2, n2_)) * b2_;
}

double SpectralGrid::max_wavenumber() const {
  // The corners of the frequency box bound |q|.
  double best = 0.0;
  for (int s1 : {-n1_ / 2, (n1_ - 1) / 2})
    for (int s2 : {-n2_ / 2, (n2_ - 1) / 2})
      best = std::max(best, (static_cast<double>(s1) * b1_ + static_cast<double>(s2) * b2_).norm());
  return best;
}

double SpectralGrid::area() const {
  return std::abs(a1_(0) * a2_(1) - a1_(1) * a2_(0));
}

double SpectralGrid::min_spacing() const {
  const Vec2 h1 = a1_ / n1_;
  const Vec2 h2 = a2_ / n2_;
  double best = std::numeric_limits<double>::infinity();
  for (int s1 = -1; s1 <= 1; ++s1)
    for (int s2 = -1; s2 <= 1; ++s2)
      if (s1 != 0 || s2 != 0) best = std::min(best, (s1 * h1 + s2 * h2).norm());
  return best;
}

struct Fft2d::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft2d::Fft2d(int n1, int n2) : n1_(n1), n2_(n2) {
  static std::map<std::pair<int, int>, std::shared_ptr<const Plans>> cache;
  std::lock_guard lock(planner_mutex());
  auto& slot = cache[{n1, n2}];
  if (!slot) {
    auto plans = std::make_shared<Plans>();
    const std::size_t n = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
    auto* scratch = fftw_alloc_complex(n);
    // Row-major with n1 fastest: FFTW dims are (n2, n1).
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans->forward = fftw_plan_dft_2d(n2, n1, scratch, scratch, FFTW_FORWARD, flags);
    plans->backward = fftw_plan_dft_2d(n2, n1, scratch, scratch, FFTW_BACKWARD, flags);
    fftw_free(scratch);
    if (!plans->forward || !plans->backward) throw Error("FFTW planning failed");
    slot = std::move(plans);
  }
  plans_ = slot;
}

void Fft2d::forward(std::span<cplx> data) const {
  const std::size_t n = static_cast<std::size_t>(n1_) * static_cast<std::size_t>(n2_);
  if (data.size() != n) throw InvalidArgument("Fft2d: buffer size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->forward, p, p);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : data) v *= scale;
}

void Fft2d::backward(std::span<cplx> data) const {
  const std::size_t n = static_cast<std::size_t>(n1_) * static_cast<std::size_t>(n2_);
  if (data.size() != n) throw InvalidArgument("Fft2d: buffer size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->backward, p, p);
}

double l2_norm(const SpectralGrid& grid, std::span<const cplx> f) {
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return std::sqrt(s * grid.sample_area());
}

cplx inner_product(const SpectralGrid& grid, std::span<const cplx> f, std::span<const cplx> g) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
  return s * grid.sample_area();
}

}  // namespace hexwave
