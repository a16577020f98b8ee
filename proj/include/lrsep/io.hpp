#pragma once

#include "lrsep/cube.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace lrsep {

// HCUBE layout (all little-endian):
//   "HCUB"  u16 version=1  u32 h  u32 w  u32 p  then h*w*p float64 values,
//   data-matrix row after row (pixel-major, band-minor).
inline constexpr std::uint16_t kHcubeVersion = 1;

void write_hcube(std::ostream& out, const HsiCube& cube);
void write_hcube(const std::filesystem::path& path, const HsiCube& cube);

/// Throws std::runtime_error on bad magic, unknown version or short payload.
HsiCube read_hcube(std::istream& in);
HsiCube read_hcube(const std::filesystem::path& path);

/// Plain numeric CSV, no header, '.' decimal separator. Rows must agree in
/// length; every cell must be a finite number.
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const Eigen::Ref<const Matrix>& m);
void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::Ref<const Matrix>& m);

/// ASCII PGM (P2), values linearly scaled from [min, max] to [0, 65535].
void write_scaled_pgm(std::ostream& out, const Eigen::Ref<const Matrix>& image);
void write_scaled_pgm(const std::filesystem::path& path,
                      const Eigen::Ref<const Matrix>& image);

/// ASCII PGM (P2) with maxval 1.
void write_mask_pgm(const std::filesystem::path& path, const Mask& mask);
void write_mask_csv(const std::filesystem::path& path, const Mask& mask);

/// Reads a P2 PGM (any maxval; nonzero is true) or, for a .csv path, a 0/1
/// matrix.
Mask read_mask(const std::filesystem::path& path);
Mask read_mask_pgm(std::istream& in);

}  // namespace lrsep
