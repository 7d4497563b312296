#include "pansharp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pansharp/gauss.hpp"

namespace ps {

namespace {

void require_same_shape(const Raster& x, const Raster& ref, const char* op) {
    if (!x.same_shape(ref)) throw DimensionError(std::string(op) + ": shape mismatch");
}

}  // namespace

double psnr(const Raster& x, const Raster& ref) {
    require_same_shape(x, ref, "psnr");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
        const double d = static_cast<double>(x.samples[i]) - ref.samples[i];
        acc += d * d;
    }
    const double mse = acc / x.samples.size();
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

namespace {

std::vector<double> ssim_window() {
    // 11x11 Gaussian window, sigma 1.5, normalized to sum 1.
    std::vector<double> w(121);
    double sum = 0.0;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) {
            const double di = i - 5, dj = j - 5;
            w[i * 11 + j] = std::exp(-(di * di + dj * dj) / (2.0 * 1.5 * 1.5));
            sum += w[i * 11 + j];
        }
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace

double ssim(const Raster& x, const Raster& ref) {
    require_same_shape(x, ref, "ssim");
    if (x.width < 11 || x.height < 11)
        throw DimensionError("ssim: image smaller than the 11x11 window");
    static const std::vector<double> win = ssim_window();
    constexpr double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    double total = 0.0;
    std::size_t count = 0;
    for (int b = 0; b < x.bands; ++b) {
        for (int y0 = 0; y0 + 11 <= x.height; ++y0) {
            for (int x0 = 0; x0 + 11 <= x.width; ++x0) {
                double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
                for (int i = 0; i < 11; ++i)
                    for (int j = 0; j < 11; ++j) {
                        const double w = win[i * 11 + j];
                        const double a = x.at(x0 + j, y0 + i, b);
                        const double r = ref.at(x0 + j, y0 + i, b);
                        mx += w * a;
                        my += w * r;
                        sxx += w * a * a;
                        syy += w * r * r;
                        sxy += w * a * r;
                    }
                const double vx = sxx - mx * mx, vy = syy - my * my, cxy = sxy - mx * my;
                total += ((2 * mx * my + c1) * (2 * cxy + c2)) /
                         ((mx * mx + my * my + c1) * (vx + vy + c2));
                ++count;
            }
        }
    }
    return total / count;
}

double sam(const Raster& x, const Raster& ref) {
    require_same_shape(x, ref, "sam");
    if (x.bands < 2) throw DimensionError("sam: needs at least 2 bands");
    const std::size_t plane = static_cast<std::size_t>(x.width) * x.height;
    double total = 0.0;
    for (std::size_t p = 0; p < plane; ++p) {
        double dot = 0, nx = 0, nr = 0;
        for (int b = 0; b < x.bands; ++b) {
            const double a = x.samples[b * plane + p];
            const double r = ref.samples[b * plane + p];
            dot += a * r;
            nx += a * a;
            nr += r * r;
        }
        if (nx <= 0.0 || nr <= 0.0) continue;  // zero-norm pixels contribute 0
        total += std::acos(std::clamp(dot / std::sqrt(nx * nr), -1.0, 1.0));
    }
    return total / plane;
}

double ergas(const Raster& x, const Raster& ref, int ratio) {
    require_same_shape(x, ref, "ergas");
    if (ratio < 1) throw ParameterError("ergas: ratio must be >= 1");
    const std::size_t plane = static_cast<std::size_t>(x.width) * x.height;
    double acc = 0.0;
    for (int b = 0; b < x.bands; ++b) {
        double mean = 0.0, mse = 0.0;
        for (std::size_t p = 0; p < plane; ++p) {
            mean += ref.samples[b * plane + p];
            const double d =
                static_cast<double>(x.samples[b * plane + p]) - ref.samples[b * plane + p];
            mse += d * d;
        }
        mean /= plane;
        mse /= plane;
        if (std::abs(mean) <= 1e-12)
            throw NumericError("ergas: reference band " + std::to_string(b) + " has ~zero mean");
        acc += mse / (mean * mean);
    }
    return 100.0 / ratio * std::sqrt(acc / x.bands);
}

namespace {

// 3x3 Laplacian response with reflect boundary.
std::vector<double> laplacian(const Raster& r, int b) {
    std::vector<double> out(static_cast<std::size_t>(r.width) * r.height);
    for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x) {
            const double c = r.at(x, y, b);
            const double n = r.at(x, reflect_index(y - 1, r.height), b);
            const double s = r.at(x, reflect_index(y + 1, r.height), b);
            const double wv = r.at(reflect_index(x - 1, r.width), y, b);
            const double e = r.at(reflect_index(x + 1, r.width), y, b);
            out[static_cast<std::size_t>(y) * r.width + x] = 4.0 * c - n - s - wv - e;
        }
    return out;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double va = 0, vb = 0, cab = 0;
    for (std::size_t i = 0; i < n; ++i) {
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
        cab += (a[i] - ma) * (b[i] - mb);
    }
    if (va <= 1e-24 || vb <= 1e-24) return 0.0;  // constant response contributes 0
    return cab / std::sqrt(va * vb);
}

}  // namespace

double scc(const Raster& x, const Raster& ref) {
    require_same_shape(x, ref, "scc");
    double total = 0.0;
    for (int b = 0; b < x.bands; ++b)
        total += pearson(laplacian(x, b), laplacian(ref, b));
    return total / x.bands;
}

double q_index(const Raster& x, const Raster& ref) {
    require_same_shape(x, ref, "q_index");
    if (x.width < 8 || x.height < 8)
        throw DimensionError("q_index: image smaller than the 8x8 window");
    constexpr int n = 8;
    constexpr double inv = 1.0 / (n * n);
    double total = 0.0;
    std::size_t count = 0;
    for (int b = 0; b < x.bands; ++b) {
        for (int y0 = 0; y0 + n <= x.height; ++y0) {
            for (int x0 = 0; x0 + n <= x.width; ++x0) {
                double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const double a = x.at(x0 + j, y0 + i, b);
                        const double r = ref.at(x0 + j, y0 + i, b);
                        sx += a;
                        sy += r;
                        sxx += a * a;
                        syy += r * r;
                        sxy += a * r;
                    }
                const double mx = sx * inv, my = sy * inv;
                const double vx = sxx * inv - mx * mx, vy = syy * inv - my * my;
                const double cxy = sxy * inv - mx * my;
                const double d1 = vx + vy, d2 = mx * mx + my * my;
                if (d1 == 0.0 || d2 == 0.0) continue;  // degenerate window skipped
                total += (2.0 * cxy / d1) * (2.0 * mx * my / d2);
                ++count;
            }
        }
    }
    if (count == 0) throw NumericError("q_index: all windows degenerate");
    return total / count;
}

namespace {

Raster band_view(const Raster& r, int b) {
    Raster out = Raster::zeros(r.width, r.height, 1);
    const std::size_t plane = static_cast<std::size_t>(r.width) * r.height;
    std::copy_n(r.samples.begin() + b * plane, plane, out.samples.begin());
    return out;
}

}  // namespace

QnrResult qnr_suite(const Raster& fused, const Raster& L, const Raster& P,
                    double blur_sigma) {
    if (P.bands != 1) throw DimensionError("qnr_suite: PAN must be single-band");
    if (!fused.same_plane(P)) throw DimensionError("qnr_suite: fused/PAN size mismatch");
    if (fused.bands != L.bands) throw DimensionError("qnr_suite: band count mismatch");
    if (P.width % L.width != 0 || P.height % L.height != 0 ||
        P.width / L.width != P.height / L.height)
        throw DimensionError("qnr_suite: PAN size is not an integer multiple of MS size");
    const int s = P.width / L.width;
    const int B = fused.bands;

    // Degrade the PAN to the LR scale (Wald blur + decimation) so band-vs-PAN
    // structure is compared at matching scales.
    const double sigma = blur_sigma < 0 ? 0.5 * s : blur_sigma;
    Raster P_lr = P;
    if (sigma > 0) {
        const int size = 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
        P_lr = convolve(P, make_gaussian(size, sigma));
    }
    P_lr = downsample(P_lr, s);

    std::vector<Raster> fb(B), lb(B);
    for (int b = 0; b < B; ++b) {
        fb[b] = band_view(fused, b);
        lb[b] = band_view(L, b);
    }

    QnrResult res;
    if (B >= 2) {
        double acc = 0.0;
        for (int i = 0; i < B; ++i)
            for (int j = 0; j < B; ++j) {
                if (i == j) continue;
                acc += std::abs(q_index(fb[i], fb[j]) - q_index(lb[i], lb[j]));
            }
        res.d_lambda = std::clamp(acc / (B * (B - 1)), 0.0, 1.0);
    }
    double acc = 0.0;
    for (int b = 0; b < B; ++b)
        acc += std::abs(q_index(fb[b], P) - q_index(lb[b], P_lr));
    res.d_s = std::clamp(acc / B, 0.0, 1.0);
    if (res.d_lambda) res.qnr = (1.0 - *res.d_lambda) * (1.0 - res.d_s);
    return res;
}

LossValues loss_values(const Raster& fused, const Raster& fused_I, const Raster& GT,
                       const Raster& GT_I, double lambda) {
    require_same_shape(fused, GT, "loss_values");
    require_same_shape(fused_I, GT_I, "loss_values");
    if (lambda < 0.0) throw ParameterError("loss_values: lambda must be >= 0");
    LossValues lv;
    double acc = 0.0;
    for (std::size_t i = 0; i < fused.samples.size(); ++i) {
        const double d = static_cast<double>(fused.samples[i]) - GT.samples[i];
        acc += d * d;
    }
    lv.l_r = std::sqrt(acc / fused.samples.size());
    lv.l_s = 1.0 - ssim(fused_I, GT_I);
    lv.l_sum = lv.l_r + lambda * lv.l_s;
    return lv;
}

}  // namespace ps
