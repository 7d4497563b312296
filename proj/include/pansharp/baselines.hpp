#pragma once

#include "pansharp/raster.hpp"

namespace ps {

// Classical component-substitution / modulation fusers. Every fuser takes
// the low-res MS raster L and the full-res single-band PAN P (dimensions an
// integer multiple of L's) and returns a raster with P's spatial size and
// L's band count.

// Plain bicubic upsampling, no injection.
Raster fuse_upsample(const Raster& L, const Raster& P);

// Generalized IHS: out = H_up + (P - intensity(H_up, w)) on every band.
Raster fuse_ihs(const Raster& L, const Raster& P, const BandWeights& w);

// Brovey: out_b = H_up_b * P / intensity(H_up, w); pixels whose intensity
// magnitude is below 1e-6 pass through unchanged.
Raster fuse_brovey(const Raster& L, const Raster& P, const BandWeights& w);

// Gram-Schmidt mode 1: per-band gain cov(H_up_b, I)/var(I) applied to
// (P - I); falls back to unit gains when var(I) <= 1e-12.
Raster fuse_gs(const Raster& L, const Raster& P, const BandWeights& w);

// SFIM: out_b = H_up_b * P / box(P), box width 2s+1 (s = scale ratio);
// guarded pass-through where |box(P)| < 1e-6.
Raster fuse_sfim(const Raster& L, const Raster& P, const BandWeights& w);

}  // namespace ps
