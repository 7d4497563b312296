#include "pansharp/baselines.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace ps {

namespace {

constexpr double kEps = 1e-6;

int scale_of(const Raster& L, const Raster& P) {
    if (P.bands != 1) throw DimensionError("fuser: PAN must be single-band");
    if (P.width % L.width != 0 || P.height % L.height != 0 ||
        P.width / L.width != P.height / L.height)
        throw DimensionError("fuser: PAN size is not an integer multiple of MS size");
    return P.width / L.width;
}

}  // namespace

Raster fuse_upsample(const Raster& L, const Raster& P) {
    return upsample(L, scale_of(L, P));
}

Raster fuse_ihs(const Raster& L, const Raster& P, const BandWeights& w) {
    const Raster up = upsample(L, scale_of(L, P));
    const Raster I = intensity(up, w);
    return replace_intensity(up, I, P);
}

Raster fuse_brovey(const Raster& L, const Raster& P, const BandWeights& w) {
    const Raster up = upsample(L, scale_of(L, P));
    const Raster I = intensity(up, w);
    Raster out = up;
    const std::size_t plane = static_cast<std::size_t>(up.width) * up.height;
    for (std::size_t p = 0; p < plane; ++p) {
        const double denom = I.samples[p];
        if (std::abs(denom) <= kEps) continue;  // pass through unchanged
        const double gain = P.samples[p] / denom;
        for (int b = 0; b < up.bands; ++b)
            out.samples[b * plane + p] = static_cast<float>(up.samples[b * plane + p] * gain);
    }
    return out;
}

Raster fuse_gs(const Raster& L, const Raster& P, const BandWeights& w) {
    const Raster up = upsample(L, scale_of(L, P));
    const Raster I = intensity(up, w);
    const std::size_t plane = static_cast<std::size_t>(up.width) * up.height;
    double mean_I = 0.0;
    for (std::size_t p = 0; p < plane; ++p) mean_I += I.samples[p];
    mean_I /= plane;
    double var_I = 0.0;
    for (std::size_t p = 0; p < plane; ++p) {
        const double d = I.samples[p] - mean_I;
        var_I += d * d;
    }
    var_I /= plane;
    std::vector<double> gains(up.bands, 1.0);
    if (var_I > 1e-12) {
        for (int b = 0; b < up.bands; ++b) {
            double mean_b = 0.0;
            for (std::size_t p = 0; p < plane; ++p) mean_b += up.samples[b * plane + p];
            mean_b /= plane;
            double cov = 0.0;
            for (std::size_t p = 0; p < plane; ++p)
                cov += (up.samples[b * plane + p] - mean_b) * (I.samples[p] - mean_I);
            gains[b] = cov / plane / var_I;
        }
    }
    Raster out = up;
    for (int b = 0; b < up.bands; ++b)
        for (std::size_t p = 0; p < plane; ++p)
            out.samples[b * plane + p] = static_cast<float>(
                up.samples[b * plane + p] +
                gains[b] * (static_cast<double>(P.samples[p]) - I.samples[p]));
    return out;
}

Raster fuse_sfim(const Raster& L, const Raster& P, const BandWeights& w) {
    (void)w;  // SFIM needs no intensity weights; kept for a uniform signature
    const int s = scale_of(L, P);
    const Raster up = upsample(L, s);
    const int width = 2 * s + 1, rad = s;
    // Separable box smoothing of the PAN with reflect boundary.
    const std::size_t plane = static_cast<std::size_t>(P.width) * P.height;
    std::vector<double> tmp(plane), smooth(plane);
    for (int y = 0; y < P.height; ++y)
        for (int x = 0; x < P.width; ++x) {
            double acc = 0.0;
            for (int t = -rad; t <= rad; ++t)
                acc += P.at(reflect_index(x + t, P.width), y, 0);
            tmp[static_cast<std::size_t>(y) * P.width + x] = acc / width;
        }
    for (int y = 0; y < P.height; ++y)
        for (int x = 0; x < P.width; ++x) {
            double acc = 0.0;
            for (int t = -rad; t <= rad; ++t)
                acc += tmp[static_cast<std::size_t>(reflect_index(y + t, P.height)) * P.width + x];
            smooth[static_cast<std::size_t>(y) * P.width + x] = acc / width;
        }
    Raster out = up;
    for (std::size_t p = 0; p < plane; ++p) {
        if (std::abs(smooth[p]) <= kEps) continue;  // pass through unchanged
        const double gain = P.samples[p] / smooth[p];
        for (int b = 0; b < up.bands; ++b)
            out.samples[b * plane + p] = static_cast<float>(up.samples[b * plane + p] * gain);
    }
    return out;
}

}  // namespace ps
