#pragma once

#include "lrsep/cube.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace lrsep {

/// Portable uniform/normal source. The engine is std::mt19937_64, whose
/// output sequence is fixed by the C++ standard; the conversions below are
/// spelled out so scenes regenerate identically on any conforming platform.
class SceneRng {
 public:
  explicit SceneRng(std::uint64_t seed) : engine_(seed) {}

  /// 53-bit uniform in [0, 1): (x >> 11) * 2^-53.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via the Box-Muller transform (one draw per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Axis-aligned block of pixels; (row, col) is the top-left corner.
struct Block {
  Index row = 0;
  Index col = 0;
  Index height = 1;
  Index width = 1;

  Index area() const { return height * width; }
};

struct SyntheticSpec {
  Index height = 40;
  Index width = 40;
  Index bands = 20;
  Index rank = 3;
  double sigma = 0.01;
  std::uint64_t seed = 1;
  Vector target;  // p-vector, values in [0, 1]
  double alpha = 1.0;
  std::vector<Block> blocks;

  /// Throws std::invalid_argument on out-of-image or overlapping blocks,
  /// alpha outside (0, 1], a bad rank or a target of the wrong length.
  void validate() const;

  /// Flat key=value lines; `target` is written as a comma list.
  std::string to_text() const;
  static SyntheticSpec from_text(const std::string& text);
};

struct GroundTruth {
  Mask mask;  // h x w
  double alpha = 0.0;
  std::vector<Block> blocks;

  Index positives() const { return mask.count(); }
};

/// |G H| + sigma * noise, G (e x r) and H (r x p) uniform(0, 1), clipped at
/// zero and divided by its maximum, so values lie in [0, 1] and a noise-free
/// background keeps rank r. Deterministic in `seed`.
HsiCube generate_background(Index height, Index width, Index bands,
                            Index rank, double sigma, std::uint64_t seed);

/// High-contrast spectrum: a random half of the bands (floor(p/2)) take
/// values in [0.9, 1), the rest in [0, 0.1). Drawn from a stream independent
/// of the background.
Vector generate_target_spectrum(Index bands, std::uint64_t seed);

/// `count` jittered copies of `base` (clamped to [0, 1]). Their mean is the
/// implanted target when the synthetic dictionary has more than one atom.
std::vector<Vector> generate_target_samples(const Vector& base, int count,
                                            double jitter, std::uint64_t seed);

struct ImplantResult {
  HsiCube cube;
  GroundTruth truth;
};

/// Replaces each block pixel b by alpha * t + (1 - alpha) * b.
ImplantResult implant_targets(const HsiCube& cube, const Vector& target,
                              double alpha, const std::vector<Block>& blocks);

enum class ConvoyPreset {
  paper,  // 101 x 101, 7 blocks of 6 x 3, p = 186
  desk,   // 40 x 40, 4 blocks of 2 x 2, p = 20
};

/// Fill fractions swept in the convoy experiment.
inline const std::vector<double> kConvoyAlphas = {0.01, 0.02, 0.05, 0.1,
                                                  0.3,  0.5,  0.8,  1.0};

/// Blocks in a single row, 3-pixel gaps, centred in the image. `bands` = 0
/// keeps the preset default.
SyntheticSpec convoy_spec(ConvoyPreset preset, double alpha,
                          std::uint64_t seed, Index bands = 0);

struct Scene {
  HsiCube background;  // before implantation
  HsiCube cube;
  GroundTruth truth;
  Vector target;
};

Scene make_scene(const SyntheticSpec& spec);

}  // namespace lrsep
