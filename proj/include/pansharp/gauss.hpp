#pragma once

#include <string>
#include <vector>

#include "pansharp/raster.hpp"

namespace ps {

// Normalized, separable 2-D Gaussian kernel. The full size x size grid is
// the outer product of the stored 1-D taps (which sum to 1), so the grid
// sums to 1 and is symmetric under flips and transposition.
struct GaussianKernel {
    int size = 1;        // odd, >= 1
    double sigma = 0.0;  // >= 0; size == 1 or sigma == 0 is the Dirac delta
    std::vector<double> taps;  // 1-D taps, length == size, sum == 1

    bool is_dirac() const;
    // Materialized size x size weight grid (outer product of taps).
    std::vector<double> grid() const;
    // Real 1-D frequency symbol S(omega) = sum_t taps[t] * cos((t-r)*omega).
    double symbol(double omega) const;
};

GaussianKernel make_gaussian(int size, double sigma);

// Per-band separable convolution with reflect boundary. A Dirac kernel
// returns a bit-identical copy.
Raster convolve(const Raster& r, const GaussianKernel& k);

// Convex mixture of Gaussian kernels over odd sizes {1, 3, ..., M}.
struct MultiScaleFilter {
    std::vector<GaussianKernel> kernels;  // strictly increasing odd sizes, first is 1
    std::vector<double> gammas;           // non-negative, sum 1 (within 1e-12)

    void validate() const;
    int max_size() const;
    // True when the mixture acts as the identity (all weight on Dirac kernels).
    bool is_identity() const;
};

// Default bank: sizes {1,3,...,max_size}, sigma = size/4, uniform gammas.
MultiScaleFilter make_bank(int max_size);
MultiScaleFilter make_bank(int max_size, const std::vector<double>& gammas);

// y = sum_k gamma_k * (g_k * x). Identity mixtures return a bit-identical copy.
Raster apply_multiscale(const Raster& r, const MultiScaleFilter& f);

// Contraction-constant certificate for the reverse-filtering iteration:
// c = max over the DFT frequency grid of |1 - ghat(omega)|, with
// ghat(u,v) = sum_k gamma_k S_k(u) S_k(v). c < 1 certifies geometric
// convergence of x <- x + y - F(x).
struct ContractionReport {
    double c = 0.0;
    int grid_w = 0;
    int grid_h = 0;
    int peak_u = 0;  // frequency indices of the max deviation
    int peak_v = 0;
};

ContractionReport contraction_constant(const MultiScaleFilter& f, int grid_w, int grid_h);
ContractionReport contraction_constant(const GaussianKernel& k, int grid_w, int grid_h);

// ---- Bank configuration files ------------------------------------------
// Text key=value format:
//   M=17
//   sigma_rule=quarter        (sigma = size/4; the default)
//   sigma_<size>=<real>       (optional per-size override)
//   gamma_<size>=<real>       (optional; omitted sizes get 0; renormalized)
// '#' starts a comment. Defaults: M=17, quarter rule, uniform gammas.
MultiScaleFilter load_bank_file(const std::string& path);
void save_bank_file(const MultiScaleFilter& f, const std::string& path);

}  // namespace ps
