#pragma once

#include <Eigen/Dense>

#include <span>
#include <string_view>
#include <vector>

namespace lrsep {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// e x p matrix, one pixel spectrum per row, rows in column-major pixel order.
using DataMatrix = Matrix;

/// Spatial boolean image (h x w).
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct PixelCoord {
  Index row = 0;
  Index col = 0;
};

/// Inclusive 1-based band range, e.g. {104, 113}.
struct BandRange {
  int first = 0;
  int last = 0;
};

/// Row of the data matrix that holds pixel (row, col) of an image with
/// `height` rows. Column-major: pixels of image column 0 come first.
constexpr Index pixel_index(Index row, Index col, Index height) {
  return col * height + row;
}

/// h x w x p hyperspectral cube. Spectra are stored as the rows of an e x p
/// matrix in column-major pixel order, so flattening is a copy.
class HsiCube {
 public:
  HsiCube(Index height, Index width, Index bands);
  HsiCube(Index height, Index width, DataMatrix pixels,
          std::vector<int> retained_bands = {});

  Index height() const { return height_; }
  Index width() const { return width_; }
  Index bands() const { return pixels_.cols(); }
  Index pixel_count() const { return pixels_.rows(); }

  double operator()(Index row, Index col, Index band) const {
    return pixels_(pixel_index(row, col, height_), band);
  }
  auto spectrum(Index row, Index col) const {
    return pixels_.row(pixel_index(row, col, height_)).transpose();
  }
  const DataMatrix& pixels() const { return pixels_; }

  /// 1-based indices (in the original band numbering) of the bands kept by
  /// apply_band_mask. Empty when no mask has been applied.
  const std::vector<int>& retained_bands() const { return retained_bands_; }

 private:
  Index height_;
  Index width_;
  DataMatrix pixels_;
  std::vector<int> retained_bands_;
};

DataMatrix flatten(const HsiCube& cube);

/// Inverse of flatten. Throws std::invalid_argument when m.rows() != h * w.
HsiCube unflatten(const Eigen::Ref<const Matrix>& m, Index height, Index width);

/// Global min-max scaling to [0, 1]. A constant cube maps to zeros.
HsiCube normalize(const HsiCube& cube);

/// Same scaling rule applied to an arbitrary matrix (used for dictionaries).
Matrix normalize_values(const Eigen::Ref<const Matrix>& values);

/// 0-based indices of the bands that survive removing `removed` from a cube
/// with `bands` bands. Throws on out-of-range indices or if nothing survives.
std::vector<Index> kept_band_indices(Index bands,
                                     std::span<const BandRange> removed);

HsiCube apply_band_mask(const HsiCube& cube, std::span<const BandRange> removed);

/// Parses "1-4,104-113,148-167" (single numbers allowed). Empty input gives
/// an empty list.
std::vector<BandRange> parse_band_ranges(std::string_view text);

/// The water-absorption bands dropped from 224-band AVIRIS scenes.
std::vector<BandRange> aviris_water_bands();

/// Per-pixel 10*log10(mean squared value over bands), floored at -120 dB.
Matrix mean_power_db(const HsiCube& cube);

}  // namespace lrsep
