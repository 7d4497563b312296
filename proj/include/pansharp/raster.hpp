#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pansharp/errors.hpp"

namespace ps {

// Multi-band raster. Samples are stored band-sequential, row-major:
// index = (b * height + y) * width + x. Values live nominally in [0,1]
// after normalization, but are never clamped by intermediate operations.
struct Raster {
    int width = 0;
    int height = 0;
    int bands = 1;
    std::vector<float> samples;

    static Raster zeros(int width, int height, int bands);

    std::size_t sample_count() const { return samples.size(); }
    std::size_t index(int x, int y, int b) const {
        return (static_cast<std::size_t>(b) * height + y) * width + x;
    }
    float at(int x, int y, int b) const { return samples[index(x, y, b)]; }
    float& at(int x, int y, int b) { return samples[index(x, y, b)]; }

    bool same_shape(const Raster& o) const {
        return width == o.width && height == o.height && bands == o.bands;
    }
    bool same_plane(const Raster& o) const {
        return width == o.width && height == o.height;
    }

    // Throws NumericError naming `context` if any sample is NaN/Inf.
    void ensure_finite(const std::string& context) const;
};

// Non-negative per-band weights summing to 1 (within 1e-12).
struct BandWeights {
    std::vector<double> weights;

    static BandWeights uniform(int bands);
    // Normalizes a non-negative vector to sum 1; throws ParameterError on
    // negative entries or a non-positive sum.
    static BandWeights normalized(std::vector<double> raw);
    void validate() const;
    int size() const { return static_cast<int>(weights.size()); }
};

// Mirror (half-sample symmetric) boundary index into [0, n).
int reflect_index(int i, int n);

// Weighted band sum (generalized IHS intensity component).
Raster intensity(const Raster& ms, const BandWeights& w);

// Additive intensity injection: out[b] = ms[b] + (new_I - old_I).
Raster replace_intensity(const Raster& ms, const Raster& old_I, const Raster& new_I);

// Bicubic (Catmull-Rom, a = -0.5) upsampling with reflect boundary.
// factor = 1 returns a bit-identical copy.
Raster upsample(const Raster& r, int factor);

// Plain decimation: out[x,y] = in[factor*x, factor*y]. Anti-alias blur is
// the caller's job.
Raster downsample(const Raster& r, int factor);

// ---- File I/O ----------------------------------------------------------
// MBR: ASCII header "MBR1\nwidth=..\nheight=..\nbands=..\ndtype=f32le\n\n"
// followed by band-sequential row-major f32 little-endian samples.
Raster read_mbr(const std::string& path);
void write_mbr(const Raster& r, const std::string& path);

// 8-bit visualization exports: round(255 * clamp(v, 0, 1)).
void write_pgm(const Raster& r, int band, const std::string& path);
void write_ppm(const Raster& r, const std::string& path);
// PGM/PPM import, values scaled by 1/maxval.
Raster read_pnm(const std::string& path);

}  // namespace ps
