// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hexwave/types.hpp"

namespace hexwave {

// HGR1 binary grid file: "HGR1", u32 version/n_components/nx/ny, f64 x0/y0/dx/dy,
// then component-major, row-major (x fastest) complex samples. All little-endian.
struct HgrFile {
  std::uint32_t version = 1;
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  std::vector<ComplexGrid> components;  // each nx * ny samples

  std::size_t payload_bytes() const { return components.size() * nx * ny * 16; }
};

void write_hgr(std::ostream& out, const HgrFile& f);
void write_hgr(const std::filesystem::path& path, const HgrFile& f);
// Throws InvalidArgument on a bad magic, version, or truncated payload.
HgrFile read_hgr(std::istream& in);
HgrFile read_hgr(const std::filesystem::path& path);

}  // namespace hexwave
