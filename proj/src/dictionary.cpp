#include "lrsep/dictionary.hpp"

#include "lrsep/io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>

namespace lrsep {

TargetDictionary::TargetDictionary(Matrix atoms) : atoms_(std::move(atoms)) {
  if (atoms_.rows() < 1 || atoms_.cols() < 1)
    throw std::invalid_argument("target dictionary is empty");
  if (!atoms_.allFinite())
    throw std::invalid_argument("target dictionary has non-finite entries");
  for (Index j = 0; j < atoms_.cols(); ++j)
    if (atoms_.col(j).isZero(0.0))
      throw std::invalid_argument("target dictionary atom " +
                                  std::to_string(j) + " is all zero");
}

TargetDictionary load_target_dictionary(std::istream& in) {
  return TargetDictionary(read_matrix_csv(in));
}

TargetDictionary load_target_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return load_target_dictionary(in);
}

TargetDictionary select_bands(const TargetDictionary& dict,
                              std::span<const Index> kept) {
  std::vector<Index> rows(kept.begin(), kept.end());
  return TargetDictionary(dict.atoms()(rows, Eigen::all));
}

Vector mean_spectrum(std::span<const Vector> samples) {
  if (samples.empty()) throw std::invalid_argument("mean_spectrum: no samples");
  Vector sum = Vector::Zero(samples.front().size());
  for (const auto& s : samples) {
    if (s.size() != sum.size())
      throw std::invalid_argument("mean_spectrum: ragged sample lengths");
    sum += s;
  }
  return sum / static_cast<double>(samples.size());
}

BackgroundDictionary build_background_dictionary(const HsiCube& background,
                                                 PixelCoord center,
                                                 int window) {
  if (window < 3 || window % 2 == 0)
    throw std::invalid_argument("window size must be odd and >= 3");
  const Index h = background.height();
  const Index w = background.width();
  if (static_cast<Index>(window) * window > h * w)
    throw std::invalid_argument("window larger than the image");
  if (center.row < 0 || center.row >= h || center.col < 0 || center.col >= w)
    throw std::invalid_argument("window centre outside the image");

  const Index half = window / 2;
  const Index r0 = std::max<Index>(0, center.row - half);
  const Index r1 = std::min<Index>(h - 1, center.row + half);
  const Index c0 = std::max<Index>(0, center.col - half);
  const Index c1 = std::min<Index>(w - 1, center.col + half);

  BackgroundDictionary dict;
  dict.window = window;
  dict.center = center;
  dict.atoms.resize(background.bands(), (r1 - r0 + 1) * (c1 - c0 + 1) - 1);
  Index k = 0;
  for (Index c = c0; c <= c1; ++c)
    for (Index r = r0; r <= r1; ++r) {
      if (r == center.row && c == center.col) continue;
      dict.atoms.col(k++) = background.spectrum(r, c);
    }
  return dict;
}

}  // namespace lrsep
