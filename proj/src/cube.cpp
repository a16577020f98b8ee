#include "lrsep/cube.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lrsep {

HsiCube::HsiCube(Index height, Index width, Index bands)
    : HsiCube(height, width, DataMatrix::Zero(height * width, bands)) {}

HsiCube::HsiCube(Index height, Index width, DataMatrix pixels,
                 std::vector<int> retained_bands)
    : height_(height),
      width_(width),
      pixels_(std::move(pixels)),
      retained_bands_(std::move(retained_bands)) {
  if (height_ < 1 || width_ < 1 || pixels_.cols() < 1)
    throw std::invalid_argument("HsiCube: dimensions must be positive");
  if (pixels_.rows() != height_ * width_)
    throw std::invalid_argument("HsiCube: pixel rows must equal height*width");
  if (!retained_bands_.empty() &&
      static_cast<Index>(retained_bands_.size()) != pixels_.cols())
    throw std::invalid_argument("HsiCube: band mask length mismatch");
}

DataMatrix flatten(const HsiCube& cube) { return cube.pixels(); }

HsiCube unflatten(const Eigen::Ref<const Matrix>& m, Index height,
                  Index width) {
  if (height < 1 || width < 1 || m.rows() != height * width)
    throw std::invalid_argument("unflatten: " + std::to_string(m.rows()) +
                                " rows cannot form a " +
                                std::to_string(height) + "x" +
                                std::to_string(width) + " image");
  return HsiCube(height, width, Matrix(m));
}

Matrix normalize_values(const Eigen::Ref<const Matrix>& values) {
  if (!values.allFinite())
    throw std::invalid_argument("normalize: non-finite value");
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  if (!(hi > lo)) return Matrix::Zero(values.rows(), values.cols());
  return ((values.array() - lo) / (hi - lo)).matrix();
}

HsiCube normalize(const HsiCube& cube) {
  return HsiCube(cube.height(), cube.width(), normalize_values(cube.pixels()),
                 cube.retained_bands());
}

std::vector<Index> kept_band_indices(Index bands,
                                     std::span<const BandRange> removed) {
  std::vector<bool> drop(static_cast<std::size_t>(bands), false);
  for (const auto& r : removed) {
    if (r.first < 1 || r.last > bands || r.first > r.last)
      throw std::invalid_argument(
          "band range " + std::to_string(r.first) + "-" +
          std::to_string(r.last) + " outside [1, " + std::to_string(bands) +
          "]");
    for (int b = r.first; b <= r.last; ++b) drop[b - 1] = true;
  }
  std::vector<Index> kept;
  for (Index b = 0; b < bands; ++b)
    if (!drop[b]) kept.push_back(b);
  if (kept.empty())
    throw std::invalid_argument("band mask removes every band");
  return kept;
}

HsiCube apply_band_mask(const HsiCube& cube,
                        std::span<const BandRange> removed) {
  const auto kept = kept_band_indices(cube.bands(), removed);
  std::vector<int> retained;
  retained.reserve(kept.size());
  for (Index b : kept)
    retained.push_back(cube.retained_bands().empty()
                           ? static_cast<int>(b + 1)
                           : cube.retained_bands()[b]);
  return HsiCube(cube.height(), cube.width(), cube.pixels()(Eigen::all, kept),
                 std::move(retained));
}

namespace {

int parse_band_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("bad band number '" + std::string(s) + "'");
  return value;
}

}  // namespace

std::vector<BandRange> parse_band_ranges(std::string_view text) {
  std::vector<BandRange> ranges;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{}
                                           : text.substr(comma + 1);
    if (item.find_first_not_of(' ') == std::string_view::npos) continue;
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      const int b = parse_band_number(item);
      ranges.push_back({b, b});
    } else {
      ranges.push_back({parse_band_number(item.substr(0, dash)),
                        parse_band_number(item.substr(dash + 1))});
    }
  }
  return ranges;
}

std::vector<BandRange> aviris_water_bands() {
  return {{1, 4}, {104, 113}, {148, 167}};
}

Matrix mean_power_db(const HsiCube& cube) {
  constexpr double floor_db = -120.0;
  Matrix out(cube.height(), cube.width());
  for (Index c = 0; c < cube.width(); ++c)
    for (Index r = 0; r < cube.height(); ++r) {
      const double power = cube.spectrum(r, c).squaredNorm() /
                           static_cast<double>(cube.bands());
      out(r, c) = power > 0.0 ? std::max(floor_db, 10.0 * std::log10(power))
                              : floor_db;
    }
  return out;
}

}  // namespace lrsep
