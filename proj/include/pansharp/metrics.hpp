#pragma once

#include <optional>

#include "pansharp/raster.hpp"

namespace ps {

// Reference metrics. All operate on same-shaped rasters over the nominal
// [0,1] domain and accumulate in double precision.

// 10*log10(1/MSE), peak 1. Identical rasters yield +infinity (text output
// caps at kPsnrTextCap).
inline constexpr double kPsnrTextCap = 99.0;
double psnr(const Raster& x, const Raster& ref);

// Mean SSIM over valid 11x11 Gaussian windows (sigma 1.5), C1 = 0.01^2,
// C2 = 0.03^2, averaged over bands. Requires min dimension >= 11.
double ssim(const Raster& x, const Raster& ref);

// Mean spectral angle (radians) between per-pixel band vectors; zero-norm
// pixels contribute 0. Requires bands >= 2.
double sam(const Raster& x, const Raster& ref);

// 100/ratio * sqrt(mean_b (RMSE_b / mean_b(ref))^2). Throws NumericError
// naming the band when a reference band mean is ~0.
double ergas(const Raster& x, const Raster& ref, int ratio = 4);

// Mean per-band Pearson correlation of 3x3 Laplacian responses; bands with
// constant response contribute 0.
double scc(const Raster& x, const Raster& ref);

// Mean Wang-Bovik universal image quality index over 8x8 sliding windows,
// averaged over bands; degenerate (zero-denominator) windows are skipped.
double q_index(const Raster& x, const Raster& ref);

// No-reference suite. d_lambda compares inter-band Q structure of the fused
// image against the original LR MS; d_s compares band-vs-PAN Q at full and
// degraded scale; qnr = (1 - d_lambda) * (1 - d_s). With a single band,
// d_lambda and qnr are not computed.
struct QnrResult {
    std::optional<double> d_lambda;
    double d_s = 0.0;
    std::optional<double> qnr;
};
// blur_sigma < 0 selects the default Wald blur (s/2) when degrading P.
QnrResult qnr_suite(const Raster& fused, const Raster& L, const Raster& P,
                    double blur_sigma = -1.0);

// Diagnostic loss values: l_r = RMS(fused - GT), l_s = 1 - ssim(fused_I, GT_I),
// l_sum = l_r + lambda * l_s.
struct LossValues {
    double l_r = 0.0;
    double l_s = 0.0;
    double l_sum = 0.0;
};
LossValues loss_values(const Raster& fused, const Raster& fused_I, const Raster& GT,
                       const Raster& GT_I, double lambda = 0.1);

}  // namespace ps
