#pragma once

#include "lrsep/cube.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>

namespace lrsep {

/// p x Nt matrix whose columns are target sample spectra. Columns are
/// finite and nonzero; atoms are used unscaled.
class TargetDictionary {
 public:
  explicit TargetDictionary(Matrix atoms);

  Index bands() const { return atoms_.rows(); }
  Index size() const { return atoms_.cols(); }
  const Matrix& atoms() const { return atoms_; }

 private:
  Matrix atoms_;
};

/// Reads a CSV with p rows and Nt columns.
TargetDictionary load_target_dictionary(std::istream& in);
TargetDictionary load_target_dictionary(const std::filesystem::path& path);

/// Keeps only the given 0-based bands (see kept_band_indices).
TargetDictionary select_bands(const TargetDictionary& dict,
                              std::span<const Index> kept);

/// Elementwise arithmetic mean of equally sized spectra.
Vector mean_spectrum(std::span<const Vector> samples);

/// Local background atoms: the spectra of the m x m window around a pixel,
/// centre excluded, clipped at the image border, in column-major pixel order.
struct BackgroundDictionary {
  Matrix atoms;  // p x n
  int window = 0;
  PixelCoord center;

  Index size() const { return atoms.cols(); }
};

BackgroundDictionary build_background_dictionary(const HsiCube& background,
                                                 PixelCoord center, int window);

}  // namespace lrsep
