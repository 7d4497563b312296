#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pansharp/gauss.hpp"
#include "pansharp/raster.hpp"

namespace ps {

struct IterationConfig {
    int iterations = 5;                // outer iteration count K
    double residual_tolerance = 0.0;   // early stop on successive-change RMS; 0 disables
    bool record_trace = true;
    int pan_inner_steps = 1;           // reverse steps on the PAN branch per outer step
};

// Per-outer-step diagnostics, all RMS. ratio[k] = ms_residual[k] /
// ms_residual[k-1] (1.0 for k = 0) and estimates the contraction constant.
struct IterationTrace {
    std::vector<double> ms_residual;
    std::vector<double> pan_residual;
    std::vector<double> delta;
    std::vector<double> ratio;
    std::size_t steps() const { return ms_residual.size(); }
};

struct FusionResult {
    Raster fused;               // H^K: PAN spatial size, MS band count
    Raster intensity_estimate;  // H_I~^K
    IterationTrace trace;
};

// One reverse-filtering step: x + y - F(x). With an identity filter this
// returns y bit-exactly (the exact value of x + y - x).
Raster reverse_step(const Raster& x, const Raster& y, const MultiScaleFilter& F);

// Alternating reverse-filtering fusion. Starts from H^0 = upsample(L, s)
// and alternates a multispectral reverse step with an intensity-domain
// reverse step against the PAN, re-injecting the updated intensity.
FusionResult arf_fuse(const Raster& L, const Raster& P, const MultiScaleFilter& f_bank,
                      const MultiScaleFilter& g_bank, const BandWeights& w,
                      const IterationConfig& cfg);

// RMS of L_up - F(H): how well H explains the upsampled low-res input.
double consistency_residual(const Raster& H, const Raster& L_up, const MultiScaleFilter& f_bank);

// CSV export: header "k,ms_residual,pan_residual,delta,ratio", 9 significant digits.
void write_trace_csv(const IterationTrace& t, const std::string& path);

struct TuneResult {
    MultiScaleFilter f_bank;
    MultiScaleFilter g_bank;
    double initial_objective = 0.0;  // L_sum of the starting gammas
    double best_objective = 0.0;     // L_sum of the returned gammas
    int evaluations = 0;
};

// Derivative-free calibration of both gamma vectors on a scene with known
// ground truth: seeded cyclic coordinate search on the simplex with
// golden-section line steps, minimizing L_sum = L_r + lambda * L_s
// (lambda = 0.1). Best-so-far; never worse than the starting point.
// budget counts objective evaluations (the starting point costs one).
TuneResult tune_gammas(const Raster& L, const Raster& P, const Raster& GT,
                       const MultiScaleFilter& f0, const MultiScaleFilter& g0,
                       const BandWeights& w, const IterationConfig& cfg, int budget,
                       std::uint64_t seed);

// RMS of the sample-wise difference (shared helper).
double rms_diff(const Raster& a, const Raster& b);

}  // namespace ps
