#include "pansharp/arf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "pansharp/metrics.hpp"
#include "pansharp/waldsim.hpp"

namespace ps {

double rms_diff(const Raster& a, const Raster& b) {
    if (!a.same_shape(b)) throw DimensionError("rms_diff: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const double d = static_cast<double>(a.samples[i]) - b.samples[i];
        acc += d * d;
    }
    return std::sqrt(acc / a.samples.size());
}

Raster reverse_step(const Raster& x, const Raster& y, const MultiScaleFilter& F) {
    if (!x.same_shape(y)) throw DimensionError("reverse_step: shape mismatch");
    F.validate();
    // Identity filter: x + y - x is exactly y.
    if (F.is_identity()) return y;
    const Raster fx = apply_multiscale(x, F);
    Raster out = Raster::zeros(x.width, x.height, x.bands);
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] = static_cast<float>(
            static_cast<double>(x.samples[i]) + y.samples[i] - fx.samples[i]);
    return out;
}

FusionResult arf_fuse(const Raster& L, const Raster& P, const MultiScaleFilter& f_bank,
                      const MultiScaleFilter& g_bank, const BandWeights& w,
                      const IterationConfig& cfg) {
    if (P.bands != 1) throw DimensionError("arf_fuse: PAN must be single-band");
    if (L.bands != w.size()) throw DimensionError("arf_fuse: band/weight count mismatch");
    if (P.width % L.width != 0 || P.height % L.height != 0 ||
        P.width / L.width != P.height / L.height)
        throw DimensionError("arf_fuse: PAN size is not an integer multiple of MS size");
    if (cfg.iterations < 1) throw ParameterError("arf_fuse: iterations must be >= 1");
    if (cfg.pan_inner_steps < 1) throw ParameterError("arf_fuse: pan_inner_steps must be >= 1");
    f_bank.validate();
    g_bank.validate();
    w.validate();

    const int scale = P.width / L.width;
    const Raster L_up = upsample(L, scale);
    const bool f_id = f_bank.is_identity();

    FusionResult res;
    Raster H = L_up;
    Raster I_est;
    for (int k = 0; k < cfg.iterations; ++k) {
        // (a) multispectral reverse step: H_half = H + L_up - f(H).
        Raster H_half;
        double ms_res;
        if (f_id) {
            ms_res = rms_diff(L_up, H);
            H_half = L_up;  // exact value of H + L_up - H
        } else {
            const Raster fH = apply_multiscale(H, f_bank);
            ms_res = rms_diff(L_up, fH);
            H_half = Raster::zeros(H.width, H.height, H.bands);
            for (std::size_t i = 0; i < H_half.samples.size(); ++i)
                H_half.samples[i] = static_cast<float>(
                    static_cast<double>(H.samples[i]) + L_up.samples[i] - fH.samples[i]);
        }
        // (b) fetch the intensity component.
        const Raster I_old = intensity(H_half, w);
        // (c) PAN-branch reverse step(s).
        Raster I_new = I_old;
        double pan_res = 0.0;
        for (int j = 0; j < cfg.pan_inner_steps; ++j) {
            if (g_bank.is_identity()) {
                if (j == 0) pan_res = rms_diff(P, I_new);
                I_new = P;
            } else {
                const Raster gI = apply_multiscale(I_new, g_bank);
                if (j == 0) pan_res = rms_diff(P, gI);
                Raster next = Raster::zeros(P.width, P.height, 1);
                for (std::size_t i = 0; i < next.samples.size(); ++i)
                    next.samples[i] = static_cast<float>(
                        static_cast<double>(I_new.samples[i]) + P.samples[i] - gI.samples[i]);
                I_new = std::move(next);
            }
        }
        // (d) re-inject the updated intensity.
        Raster H_next = replace_intensity(H_half, I_old, I_new);
        H_next.ensure_finite("arf_fuse step " + std::to_string(k));
        const double delta = rms_diff(H_next, H);
        if (cfg.record_trace) {
            res.trace.ms_residual.push_back(ms_res);
            res.trace.pan_residual.push_back(pan_res);
            res.trace.delta.push_back(delta);
            res.trace.ratio.push_back(
                k == 0 ? 1.0 : ms_res / std::max(res.trace.ms_residual[k - 1], 1e-300));
        }
        H = std::move(H_next);
        I_est = std::move(I_new);
        if (cfg.residual_tolerance > 0.0 && delta < cfg.residual_tolerance) break;
    }
    res.fused = std::move(H);
    res.intensity_estimate = std::move(I_est);
    return res;
}

double consistency_residual(const Raster& H, const Raster& L_up,
                            const MultiScaleFilter& f_bank) {
    if (!H.same_shape(L_up)) throw DimensionError("consistency_residual: shape mismatch");
    return rms_diff(L_up, apply_multiscale(H, f_bank));
}

void write_trace_csv(const IterationTrace& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "k,ms_residual,pan_residual,delta,ratio\n";
    char buf[256];
    for (std::size_t k = 0; k < t.steps(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g\n", k, t.ms_residual[k],
                      t.pan_residual[k], t.delta[k], t.ratio[k]);
        out << buf;
    }
    if (!out) throw IoError("write failed for " + path);
}

// ---- gamma tuning ------------------------------------------------------

namespace {

double evaluate(const Raster& L, const Raster& P, const Raster& GT, const Raster& GT_I,
                const MultiScaleFilter& fb, const MultiScaleFilter& gb,
                const BandWeights& w, const IterationConfig& cfg) {
    IterationConfig c = cfg;
    c.record_trace = false;
    const FusionResult r = arf_fuse(L, P, fb, gb, w, c);
    return loss_values(r.fused, r.intensity_estimate, GT, GT_I, 0.1).l_sum;
}

void set_gammas(MultiScaleFilter& f, const std::vector<double>& g) { f.gammas = g; }

// Clean a gamma vector back onto the simplex (guards float drift only).
std::vector<double> renormalize(std::vector<double> g) {
    double sum = 0.0;
    for (double& v : g) {
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    for (double& v : g) v /= sum;
    return g;
}

// gamma(t) = (1 - t) * gamma + t * e_k stays on the simplex for
// t in [-gamma_k / (1 - gamma_k), 1).
std::vector<double> line_point(const std::vector<double>& g, std::size_t k, double t) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = (1.0 - t) * g[i];
    out[k] += t;
    return renormalize(out);
}

std::vector<double> geometric_profile(std::size_t n, double rho) {
    std::vector<double> g(n);
    double v = 1.0;
    for (std::size_t i = 0; i < n; ++i, v *= rho) g[i] = v;
    return renormalize(g);
}

}  // namespace

TuneResult tune_gammas(const Raster& L, const Raster& P, const Raster& GT,
                       const MultiScaleFilter& f0, const MultiScaleFilter& g0,
                       const BandWeights& w, const IterationConfig& cfg, int budget,
                       std::uint64_t seed) {
    if (budget < 1) throw ParameterError("tune_gammas: budget must be >= 1");
    f0.validate();
    g0.validate();
    const Raster GT_I = intensity(GT, w);

    TuneResult res;
    res.f_bank = f0;
    res.g_bank = g0;
    int evals = 0;
    auto obj = [&](const MultiScaleFilter& fb, const MultiScaleFilter& gb) {
        ++evals;
        return evaluate(L, P, GT, GT_I, fb, gb, w, cfg);
    };
    double best = obj(res.f_bank, res.g_bank);
    res.initial_objective = best;

    // Two gamma vectors to optimize; bank 0 is the MS branch, bank 1 the PAN branch.
    auto bank_of = [&](int which) -> MultiScaleFilter& {
        return which == 0 ? res.f_bank : res.g_bank;
    };
    auto try_candidate = [&](int which, const std::vector<double>& g) {
        if (evals >= budget) return;
        MultiScaleFilter fb = res.f_bank, gb = res.g_bank;
        set_gammas(which == 0 ? fb : gb, g);
        const double v = obj(fb, gb);
        if (v < best) {
            best = v;
            set_gammas(bank_of(which), g);
        }
    };

    // Structured warm starts: identity, uniform, front/back-loaded profiles.
    for (int which = 0; which < 2; ++which) {
        const std::size_t n = bank_of(which).gammas.size();
        if (n < 2) continue;
        std::vector<double> dirac(n, 0.0);
        dirac[0] = 1.0;
        try_candidate(which, dirac);
        try_candidate(which, std::vector<double>(n, 1.0 / n));
        try_candidate(which, geometric_profile(n, 0.6));
        try_candidate(which, geometric_profile(n, 1.6));
    }

    // Cyclic coordinate search with a coarse golden-section line probe.
    SplitMix64 rng(seed);
    constexpr double kInvPhi = 0.6180339887498949;
    while (evals < budget) {
        // Visit every (bank, coordinate) pair in a seeded random order.
        std::vector<std::pair<int, std::size_t>> coords;
        for (int which = 0; which < 2; ++which)
            for (std::size_t k = 0; k < bank_of(which).gammas.size(); ++k)
                coords.emplace_back(which, k);
        for (std::size_t i = coords.size(); i > 1; --i)
            std::swap(coords[i - 1], coords[static_cast<std::size_t>(rng.next_unit() * i)]);

        bool improved_pass = false;
        for (const auto& [which, k] : coords) {
            if (evals >= budget) break;
            const std::vector<double> g = bank_of(which).gammas;
            if (g.size() < 2) continue;
            const double gk = g[k];
            double lo = gk >= 1.0 ? 0.0 : std::max(-0.8, -gk / (1.0 - gk));
            double hi = 0.95;
            // Golden-section refinement of t on [lo, hi] (5 probes max).
            double a = lo, b = hi;
            double c1 = b - kInvPhi * (b - a), c2 = a + kInvPhi * (b - a);
            auto probe = [&](double t) {
                MultiScaleFilter fb = res.f_bank, gb = res.g_bank;
                set_gammas(which == 0 ? fb : gb, line_point(g, k, t));
                ++evals;
                return evaluate(L, P, GT, GT_I, fb, gb, w, cfg);
            };
            double v1 = probe(c1);
            if (evals >= budget) {
                if (v1 < best) {
                    best = v1;
                    set_gammas(bank_of(which), line_point(g, k, c1));
                    improved_pass = true;
                }
                break;
            }
            double v2 = probe(c2);
            double best_t = v1 < v2 ? c1 : c2;
            double best_v = std::min(v1, v2);
            for (int it = 0; it < 3 && evals < budget; ++it) {
                if (v1 < v2) {
                    b = c2;
                    c2 = c1;
                    v2 = v1;
                    c1 = b - kInvPhi * (b - a);
                    v1 = probe(c1);
                } else {
                    a = c1;
                    c1 = c2;
                    v1 = v2;
                    c2 = a + kInvPhi * (b - a);
                    v2 = probe(c2);
                }
                if (v1 < best_v) {
                    best_v = v1;
                    best_t = c1;
                }
                if (v2 < best_v) {
                    best_v = v2;
                    best_t = c2;
                }
            }
            if (best_v < best) {
                best = best_v;
                set_gammas(bank_of(which), line_point(g, k, best_t));
                improved_pass = true;
            }
        }
        (void)improved_pass;  // search continues until the budget is spent
    }

    res.f_bank.gammas = renormalize(res.f_bank.gammas);
    res.g_bank.gammas = renormalize(res.g_bank.gammas);
    res.best_objective = best;
    res.evaluations = evals;
    return res;
}

}  // namespace ps
