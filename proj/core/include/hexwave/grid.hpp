// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "hexwave/types.hpp"

namespace hexwave {

// Uniform periodic grid on the parallelogram origin + [0,1)a1 + [0,1)a2.
// Samples are stored with i1 fastest: index = i2 * n1 + i1.
class SpectralGrid {
 public:
  SpectralGrid(Vec2 origin, Vec2 a1, Vec2 a2, int n1, int n2);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  std::size_t size() const { return static_cast<std::size_t>(n1_) * static_cast<std::size_t>(n2_); }
  const Vec2& origin() const { return origin_; }
  const Vec2& a1() const { return a1_; }
  const Vec2& a2() const { return a2_; }
  const Vec2& b1() const { return b1_; }
  const Vec2& b2() const { return b2_; }

  std::size_t index(int i1, int i2) const {
    return static_cast<std::size_t>(i2) * static_cast<std::size_t>(n1_) + static_cast<std::size_t>(i1);
  }
  Vec2 point(int i1, int i2) const;
  Vec2 point(std::size_t idx) const { return point(static_cast<int>(idx % n1_), static_cast<int>(idx / n1_)); }

  // Signed FFT frequency of storage slot i along an axis of length n.
  static int signed_frequency(int i, int n) { return i < (n + 1) / 2 ? i : i - n; }
  static int slot_of_frequency(int j, int n) { return ((j % n) + n) % n; }
  // Physical wave vector of the Fourier slot (i1, i2).
  Vec2 wavevector(int i1, int i2) const;
  Vec2 wavevector(std::size_t idx) const {
    return wavevector(static_cast<int>(idx % n1_), static_cast<int>(idx / n1_));
  }
  double max_wavenumber() const;

  double area() const;
  double sample_area() const { return area() / static_cast<double>(size()); }
  // Smallest distance between distinct grid points.
  double min_spacing() const;

 private:
  Vec2 origin_, a1_, a2_, b1_, b2_;
  int n1_, n2_;
};

// In-place 2D FFT bound to a grid shape. forward() applies the normalized
// transform f̂_j = N^{-1} Σ f e^{-2πi j.i/n}, backward() the exact inverse, so
// that f(x) = Σ f̂(q) e^{iq.(x - origin)}. Plans are cached per shape and may be
// executed concurrently.
class Fft2d {
 public:
  Fft2d(int n1, int n2);
  explicit Fft2d(const SpectralGrid& grid) : Fft2d(grid.n1(), grid.n2()) {}

  void forward(std::span<cplx> data) const;
  void backward(std::span<cplx> data) const;

 private:
  struct Plans;
  std::shared_ptr<const Plans> plans_;
  int n1_, n2_;
};

double l2_norm(const SpectralGrid& grid, std::span<const cplx> f);
cplx inner_product(const SpectralGrid& grid, std::span<const cplx> f, std::span<const cplx> g);

}  // namespace hexwave
