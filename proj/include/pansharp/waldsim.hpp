#pragma once

#include <cstdint>

#include "pansharp/raster.hpp"

namespace ps {

// Portable seeded generator (SplitMix64) so "seeded" means the same byte
// stream in every implementation of this toolkit.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64();
    // Uniform double in [0,1): next_u64() / 2^64.
    double next_unit();
    // Standard normal via Box-Muller (consumes two uniforms per pair).
    double next_gaussian();

  private:
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Wald-protocol degradation parameters.
struct WaldConfig {
    int ratio = 4;             // resolution ratio s (>= 2)
    double blur_sigma = -1.0;  // < 0 selects the default s/2
    BandWeights pan_weights;   // PAN synthesis weights
    double noise_sigma = 0.0;  // additive Gaussian noise on the LR output
    std::uint64_t noise_seed = 0;

    double effective_sigma() const { return blur_sigma < 0 ? 0.5 * ratio : blur_sigma; }
    void validate() const;
};

// L = (H * k) downsampled by s, plus seeded zero-mean Gaussian noise.
// The blur kernel is Gaussian with size 2*ceil(3*sigma)+1; sigma = 0 is
// pure decimation.
Raster degrade(const Raster& H, const WaldConfig& cfg);

// PAN = weighted band sum of H at full resolution, so the GIHS intensity
// assumption holds exactly on simulated scenes.
Raster synth_pan(const Raster& H, const WaldConfig& cfg);

enum class SceneKind { gradient, checker, blobs, text };
SceneKind scene_kind_from_string(const std::string& name);
std::string to_string(SceneKind k);

// Deterministic procedural HR MS scene with inter-band correlation (shared
// structure plus per-band gain/offset) and sharp edges. Values in [0,1].
// Requires width, height >= 32.
Raster make_scene(SceneKind kind, int width, int height, int bands, std::uint64_t seed);

}  // namespace ps
