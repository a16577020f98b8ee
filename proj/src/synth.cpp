#include "lrsep/synth.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lrsep {

double SceneRng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

bool overlaps(const Block& a, const Block& b) {
  return a.row < b.row + b.height && b.row < a.row + a.height &&
         a.col < b.col + b.width && b.col < a.col + a.width;
}

std::string fmt(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad number '" + std::string(s) + "'");
  return v;
}

template <typename Int>
Int parse_int(std::string_view s) {
  Int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

// Seed offsets for the independent target streams.
constexpr std::uint64_t kTargetStream = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kSampleStream = 0xD1B54A32D192ED03ULL;

}  // namespace

void SyntheticSpec::validate() const {
  if (height < 1 || width < 1 || bands < 1)
    throw std::invalid_argument("synthetic scene dimensions must be positive");
  if (rank < 1 || rank > std::min(height * width, bands))
    throw std::invalid_argument("background rank must be in [1, min(h*w, p)]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("noise sigma must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1]");
  if (target.size() != bands)
    throw std::invalid_argument("target spectrum length must equal bands");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (b.height < 1 || b.width < 1 || b.row < 0 || b.col < 0 ||
        b.row + b.height > height || b.col + b.width > width)
      throw std::invalid_argument("block " + std::to_string(i) +
                                  " lies outside the image");
    for (std::size_t j = 0; j < i; ++j)
      if (overlaps(b, blocks[j]))
        throw std::invalid_argument("blocks " + std::to_string(j) + " and " +
                                    std::to_string(i) + " overlap");
  }
}

std::string SyntheticSpec::to_text() const {
  std::ostringstream out;
  out << "height=" << height << "\nwidth=" << width << "\nbands=" << bands
      << "\nrank=" << rank << "\nsigma=" << fmt(sigma) << "\nseed=" << seed
      << "\nalpha=" << fmt(alpha) << "\nblocks=";
  for (std::size_t i = 0; i < blocks.size(); ++i)
    out << (i ? ";" : "") << blocks[i].row << ':' << blocks[i].col << ':'
        << blocks[i].height << ':' << blocks[i].width;
  out << "\ntarget=";
  for (Index i = 0; i < target.size(); ++i) out << (i ? "," : "") << fmt(target(i));
  out << '\n';
  return out.str();
}

SyntheticSpec SyntheticSpec::from_text(const std::string& text) {
  SyntheticSpec spec;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("spec line without '=': " + line);
    const std::string key = line.substr(0, eq);
    const std::string_view value = std::string_view(line).substr(eq + 1);
    if (key == "height") spec.height = parse_int<Index>(value);
    else if (key == "width") spec.width = parse_int<Index>(value);
    else if (key == "bands") spec.bands = parse_int<Index>(value);
    else if (key == "rank") spec.rank = parse_int<Index>(value);
    else if (key == "sigma") spec.sigma = parse_double(value);
    else if (key == "seed") spec.seed = parse_int<std::uint64_t>(value);
    else if (key == "alpha") spec.alpha = parse_double(value);
    else if (key == "blocks") {
      spec.blocks.clear();
      if (value.empty()) continue;
      for (auto item : split(value, ';')) {
        const auto f = split(item, ':');
        if (f.size() != 4) throw std::invalid_argument("bad block entry");
        spec.blocks.push_back({parse_int<Index>(f[0]), parse_int<Index>(f[1]),
                               parse_int<Index>(f[2]), parse_int<Index>(f[3])});
      }
    } else if (key == "target") {
      const auto f = value.empty() ? std::vector<std::string_view>{}
                                   : split(value, ',');
      spec.target.resize(static_cast<Index>(f.size()));
      for (std::size_t i = 0; i < f.size(); ++i)
        spec.target(static_cast<Index>(i)) = parse_double(f[i]);
    } else {
      throw std::invalid_argument("unknown spec key '" + key + "'");
    }
  }
  return spec;
}

HsiCube generate_background(Index height, Index width, Index bands,
                            Index rank, double sigma, std::uint64_t seed) {
  if (height < 1 || width < 1 || bands < 1)
    throw std::invalid_argument("background dimensions must be positive");
  const Index e = height * width;
  if (rank < 1 || rank > std::min(e, bands))
    throw std::invalid_argument("background rank must be in [1, min(h*w, p)]");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");

  // Draw order: G, then H, then noise, each in column-major order.
  SceneRng rng(seed);
  Matrix g(e, rank), h(rank, bands);
  for (Index j = 0; j < g.cols(); ++j)
    for (Index i = 0; i < g.rows(); ++i) g(i, j) = rng.uniform();
  for (Index j = 0; j < h.cols(); ++j)
    for (Index i = 0; i < h.rows(); ++i) h(i, j) = rng.uniform();
  Matrix d = (g * h).cwiseAbs();
  if (sigma > 0.0)
    for (Index j = 0; j < d.cols(); ++j)
      for (Index i = 0; i < d.rows(); ++i) d(i, j) += sigma * rng.normal();
  // Scale by the peak rather than min-max: subtracting the minimum would add a
  // rank-one offset. Noise can push a few entries below zero; clip those.
  d = d.cwiseMax(0.0);
  const double peak = d.maxCoeff();
  if (peak > 0.0) d /= peak;
  return HsiCube(height, width, std::move(d));
}

Vector generate_target_spectrum(Index bands, std::uint64_t seed) {
  if (bands < 1) throw std::invalid_argument("target needs at least one band");
  SceneRng rng(seed ^ kTargetStream);
  // Fisher-Yates with j = floor(u * (i + 1)).
  std::vector<Index> order(static_cast<std::size_t>(bands));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = bands - 1; i > 0; --i)
    std::swap(order[i], order[static_cast<Index>(rng.uniform() * (i + 1))]);
  Vector t(bands);
  for (Index k = 0; k < bands; ++k) {
    const double u = rng.uniform();
    t(order[k]) = k < bands / 2 ? 0.9 + 0.1 * u : 0.1 * u;
  }
  return t;
}

std::vector<Vector> generate_target_samples(const Vector& base, int count,
                                            double jitter,
                                            std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  SceneRng rng(seed ^ kSampleStream);
  std::vector<Vector> samples;
  for (int k = 0; k < count; ++k) {
    Vector s(base.size());
    for (Index i = 0; i < s.size(); ++i)
      s(i) = std::clamp(base(i) + jitter * rng.normal(), 0.0, 1.0);
    samples.push_back(std::move(s));
  }
  return samples;
}

ImplantResult implant_targets(const HsiCube& cube, const Vector& target,
                              double alpha, const std::vector<Block>& blocks) {
  SyntheticSpec check;
  check.height = cube.height();
  check.width = cube.width();
  check.bands = cube.bands();
  check.rank = 1;
  check.alpha = alpha;
  check.target = target;
  check.blocks = blocks;
  check.validate();

  DataMatrix pixels = cube.pixels();
  Mask mask = Mask::Constant(cube.height(), cube.width(), false);
  for (const auto& b : blocks)
    for (Index c = b.col; c < b.col + b.width; ++c)
      for (Index r = b.row; r < b.row + b.height; ++r) {
        auto row = pixels.row(pixel_index(r, c, cube.height()));
        row = alpha * target.transpose() + (1.0 - alpha) * row;
        mask(r, c) = true;
      }
  return {HsiCube(cube.height(), cube.width(), std::move(pixels),
                  cube.retained_bands()),
          GroundTruth{std::move(mask), alpha, blocks}};
}

SyntheticSpec convoy_spec(ConvoyPreset preset, double alpha,
                          std::uint64_t seed, Index bands) {
  SyntheticSpec spec;
  Index count = 0, bh = 0, bw = 0;
  switch (preset) {
    case ConvoyPreset::paper:
      spec.height = spec.width = 101;
      spec.bands = 186;
      count = 7, bh = 6, bw = 3;
      break;
    case ConvoyPreset::desk:
      spec.height = spec.width = 40;
      spec.bands = 20;
      count = 4, bh = 2, bw = 2;
      break;
  }
  if (bands > 0) spec.bands = bands;
  spec.rank = std::min<Index>(3, spec.bands);
  spec.sigma = 0.01;
  spec.seed = seed;
  spec.alpha = alpha;
  spec.target = generate_target_spectrum(spec.bands, seed);

  constexpr Index gap = 3;
  const Index span = count * bw + (count - 1) * gap;
  if (span > spec.width || bh > spec.height)
    throw std::invalid_argument("convoy does not fit in the image");
  const Index row = (spec.height - bh) / 2;
  const Index col0 = (spec.width - span) / 2;
  for (Index k = 0; k < count; ++k)
    spec.blocks.push_back({row, col0 + k * (bw + gap), bh, bw});
  spec.validate();
  return spec;
}

Scene make_scene(const SyntheticSpec& spec) {
  spec.validate();
  HsiCube background = generate_background(spec.height, spec.width, spec.bands,
                                           spec.rank, spec.sigma, spec.seed);
  auto implanted = implant_targets(background, spec.target, spec.alpha,
                                   spec.blocks);
  return {std::move(background), std::move(implanted.cube),
          std::move(implanted.truth), spec.target};
}

}  // namespace lrsep
