#include "pansharp/waldsim.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pansharp/gauss.hpp"

namespace ps {

std::uint64_t SplitMix64::next_u64() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
    return static_cast<double>(next_u64()) * 0x1p-64;
}

double SplitMix64::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_unit();
    const double u2 = next_unit();
    if (u1 <= 0.0) u1 = 0x1p-64;
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 2.0 * std::acos(-1.0);
    spare_ = mag * std::sin(two_pi * u2);
    have_spare_ = true;
    return mag * std::cos(two_pi * u2);
}

void WaldConfig::validate() const {
    if (ratio < 2) throw ParameterError("wald: ratio must be >= 2");
    if (noise_sigma < 0.0) throw ParameterError("wald: noise sigma must be >= 0");
}

Raster degrade(const Raster& H, const WaldConfig& cfg) {
    cfg.validate();
    if (H.width % cfg.ratio != 0 || H.height % cfg.ratio != 0)
        throw DimensionError("degrade: dimensions not divisible by the ratio");
    const double sigma = cfg.effective_sigma();
    Raster blurred = H;
    if (sigma > 0.0) {
        const int size = 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
        blurred = convolve(H, make_gaussian(size, sigma));
    }
    Raster lr = downsample(blurred, cfg.ratio);
    if (cfg.noise_sigma > 0.0) {
        SplitMix64 rng(cfg.noise_seed);
        for (float& v : lr.samples)
            v = static_cast<float>(v + cfg.noise_sigma * rng.next_gaussian());
    }
    return lr;
}

Raster synth_pan(const Raster& H, const WaldConfig& cfg) {
    cfg.pan_weights.validate();
    return intensity(H, cfg.pan_weights);
}

SceneKind scene_kind_from_string(const std::string& name) {
    if (name == "gradient") return SceneKind::gradient;
    if (name == "checker") return SceneKind::checker;
    if (name == "blobs") return SceneKind::blobs;
    if (name == "text") return SceneKind::text;
    throw ParameterError("unknown scene kind: " + name);
}

std::string to_string(SceneKind k) {
    switch (k) {
        case SceneKind::gradient: return "gradient";
        case SceneKind::checker: return "checker";
        case SceneKind::blobs: return "blobs";
        case SceneKind::text: return "text";
    }
    return "?";
}

namespace {

// Shared per-band linear map: gain shrinks from 1.0 toward 0.5 across bands.
double band_gain(int b, int bands) {
    return 1.0 - 0.5 * b / std::max(1, bands - 1);
}

Raster gradient_scene(int w, int h, int bands) {
    Raster r = Raster::zeros(w, h, bands);
    for (int b = 0; b < bands; ++b) {
        const double gain = band_gain(b, bands);
        const double offset = 0.25 * b / std::max(1, bands - 1);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double s = static_cast<double>(x + y) / (w + h - 2);
                r.at(x, y, b) = static_cast<float>(gain * s + offset);
            }
    }
    return r;
}

Raster checker_scene(int w, int h, int bands) {
    Raster r = Raster::zeros(w, h, bands);
    for (int b = 0; b < bands; ++b) {
        const double gain = band_gain(b, bands);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double s = ((x / 8 + y / 8) % 2 == 0) ? 0.1 : 0.9;
                r.at(x, y, b) = static_cast<float>(gain * s);
            }
    }
    return r;
}

// Rich scene for fusion experiments: shared sharp rectangles (pure intensity
// structure), smooth correlated blobs with per-band amplitude jitter, and
// band-specific band-limited gratings whose spatial frequency sits below the
// decimation Nyquist, so the detail is recoverable in principle.
Raster blobs_scene(int w, int h, int bands, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const double pi = std::acos(-1.0);
    const int nmin = std::min(w, h);
    std::vector<double> edges(static_cast<std::size_t>(w) * h, 0.0);
    for (int i = 0; i < 5; ++i) {
        const int x0 = static_cast<int>(rng.next_unit() * w * 0.8);
        const int y0 = static_cast<int>(rng.next_unit() * h * 0.8);
        const int rw = static_cast<int>((0.08 + 0.15 * rng.next_unit()) * w);
        const int rh = static_cast<int>((0.08 + 0.15 * rng.next_unit()) * h);
        const double amp = 0.3 + 0.3 * rng.next_unit();
        for (int y = y0; y < std::min(h, y0 + rh); ++y)
            for (int x = x0; x < std::min(w, x0 + rw); ++x)
                edges[static_cast<std::size_t>(y) * w + x] += amp;
    }
    for (double& v : edges) v = std::clamp(v, 0.0, 0.8);

    std::vector<double> blob(static_cast<std::size_t>(w) * h * bands, 0.0);
    for (int i = 0; i < 10; ++i) {
        const double cx = rng.next_unit() * w;
        const double cy = rng.next_unit() * h;
        const double rad = (0.05 + 0.08 * rng.next_unit()) * nmin;
        const double amp = 0.25 + 0.45 * rng.next_unit();
        std::vector<double> scale(bands);
        for (int b = 0; b < bands; ++b) scale[b] = amp * (0.7 + 0.6 * rng.next_unit());
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                const double base = std::exp(-d2 / (2.0 * rad * rad));
                for (int b = 0; b < bands; ++b)
                    blob[(static_cast<std::size_t>(b) * h + y) * w + x] += scale[b] * base;
            }
    }

    std::vector<double> tex(static_cast<std::size_t>(w) * h * bands, 0.0);
    for (int i = 0; i < 3 * bands; ++i) {
        const double cx = rng.next_unit() * w;
        const double cy = rng.next_unit() * h;
        const double rad = (0.08 + 0.06 * rng.next_unit()) * nmin;
        const double omega = pi / 8.0 + (pi / 5.0 - pi / 8.0) * rng.next_unit();
        const double theta = rng.next_unit() * pi;
        const double phase = rng.next_unit() * 2.0 * pi;
        const int owner = i % bands;
        const double ct = std::cos(theta), st = std::sin(theta);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                const double g =
                    std::exp(-d2 / (2.0 * rad * rad)) * std::cos(omega * (x * ct + y * st) + phase);
                for (int b = 0; b < bands; ++b)
                    tex[(static_cast<std::size_t>(b) * h + y) * w + x] +=
                        (b == owner ? 0.35 : 0.06) * g;
            }
    }

    Raster r = Raster::zeros(w, h, bands);
    for (int b = 0; b < bands; ++b)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const std::size_t p = static_cast<std::size_t>(y) * w + x;
                const std::size_t q = (static_cast<std::size_t>(b) * h + y) * w + x;
                const double v =
                    0.15 + 0.05 * b + 0.30 * edges[p] + 0.175 * blob[q] + tex[q];
                r.at(x, y, b) = static_cast<float>(std::clamp(v, 0.0, 1.0));
            }
    return r;
}

Raster text_scene(int w, int h, int bands, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> page(static_cast<std::size_t>(w) * h, 0.85);
    for (int i = 0; i < 24; ++i) {
        const bool horizontal = rng.next_unit() < 0.5;
        const int x0 = static_cast<int>(rng.next_unit() * w);
        const int y0 = static_cast<int>(rng.next_unit() * h);
        const int len = 4 + static_cast<int>(rng.next_unit() * 0.2 * std::min(w, h));
        const int thick = 1 + static_cast<int>(rng.next_unit() * 2.0);
        const int lw = horizontal ? len : thick;
        const int lh = horizontal ? thick : len;
        for (int y = y0; y < std::min(h, y0 + lh); ++y)
            for (int x = x0; x < std::min(w, x0 + lw); ++x)
                page[static_cast<std::size_t>(y) * w + x] = 0.15;
    }
    Raster r = Raster::zeros(w, h, bands);
    for (int b = 0; b < bands; ++b) {
        const double gain = band_gain(b, bands);
        const double offset = 0.15 * b / std::max(1, bands - 1);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                r.at(x, y, b) = static_cast<float>(
                    gain * page[static_cast<std::size_t>(y) * w + x] + offset);
    }
    return r;
}

}  // namespace

Raster make_scene(SceneKind kind, int width, int height, int bands, std::uint64_t seed) {
    if (width < 32 || height < 32)
        throw ParameterError("make_scene: dimensions must be >= 32");
    if (bands < 1) throw ParameterError("make_scene: bands must be >= 1");
    switch (kind) {
        case SceneKind::gradient: return gradient_scene(width, height, bands);
        case SceneKind::checker: return checker_scene(width, height, bands);
        case SceneKind::blobs: return blobs_scene(width, height, bands, seed);
        case SceneKind::text: return text_scene(width, height, bands, seed);
    }
    throw ParameterError("make_scene: unknown kind");
}

}  // namespace ps
