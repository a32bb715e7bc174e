// SPDX-License-Identifier: Apache-2.0
#include "hexwave/hgr.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "hexwave/error.hpp"

namespace hexwave {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::ostream& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  unsigned char b[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(b), sizeof(T))) throw InvalidArgument("read_hgr: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void write_hgr(std::ostream& out, const HgrFile& f) {
  if (f.version != 1) throw InvalidArgument("write_hgr: only version 1 is supported");
  const std::size_t n = static_cast<std::size_t>(f.nx) * f.ny;
  for (const auto& c : f.components)
    if (c.size() != n) throw InvalidArgument("write_hgr: component size does not match nx * ny");
  out.write("HGR1", 4);
  put<std::uint32_t>(out, f.version);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.components.size()));
  put<std::uint32_t>(out, f.nx);
  put<std::uint32_t>(out, f.ny);
  put<double>(out, f.x0);
  put<double>(out, f.y0);
  put<double>(out, f.dx);
  put<double>(out, f.dy);
  for (const auto& c : f.components)
    for (const cplx& z : c) {
      put<double>(out, z.real());
      put<double>(out, z.imag());
    }
  if (!out) throw Error("write_hgr: stream error");
}

void write_hgr(const std::filesystem::path& path, const HgrFile& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_hgr: cannot open " + path.string());
  write_hgr(out, f);
}

HgrFile read_hgr(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "HGR1", 4) != 0) throw InvalidArgument("read_hgr: bad magic");
  HgrFile f;
  f.version = get<std::uint32_t>(in);
  if (f.version != 1) throw InvalidArgument("read_hgr: unsupported version " + std::to_string(f.version));
  const auto nc = get<std::uint32_t>(in);
  f.nx = get<std::uint32_t>(in);
  f.ny = get<std::uint32_t>(in);
  f.x0 = get<double>(in);
  f.y0 = get<double>(in);
  f.dx = get<double>(in);
  f.dy = get<double>(in);
  const std::size_t n = static_cast<std::size_t>(f.nx) * f.ny;
  f.components.assign(nc, ComplexGrid(n));
  for (auto& c : f.components)
    for (cplx& z : c) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      z = cplx(re, im);
    }
  if (in.peek() != std::char_traits<char>::eof()) throw InvalidArgument("read_hgr: trailing bytes after payload");
  return f;
}

HgrFile read_hgr(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("read_hgr: cannot open " + path.string());
  return read_hgr(in);
}

}  // namespace hexwave
