// pansharp: pan-sharpening toolkit command-line interface.
//
// Subcommands:
//   simulate  Wald-protocol scene generation (gt/lr/pan + manifest)
//   sharpen   fuse LR MS + PAN with ARF or a classical baseline
//   evaluate  reference and no-reference quality metrics
//   verify    contraction-constant certificate for a filter bank
//   tune      calibrate bank mixing coefficients on a scene with ground truth
//   convert   MBR <-> PGM/PPM conversion

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pansharp/arf.hpp"
#include "pansharp/baselines.hpp"
#include "pansharp/errors.hpp"
#include "pansharp/gauss.hpp"
#include "pansharp/metrics.hpp"
#include "pansharp/raster.hpp"
#include "pansharp/waldsim.hpp"

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt9(double v) {
    if (std::isinf(v)) v = ps::kPsnrTextCap;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ps::IoError("cannot open " + path + " for checksumming");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    return h;
}

std::string hex64(std::uint64_t h) {
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

struct ManifestTimer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start)
            .count();
    }
};

void write_manifest(const std::string& path, const std::string& command, json params,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double duration_ms) {
    json m;
    m["tool"] = "pansharp";
    m["version"] = kVersion;
    m["command"] = command;
    m["parameters"] = std::move(params);
    json cks = json::object();
    for (const auto& p : inputs) cks[p] = hex64(fnv1a64_file(p));
    m["input_checksums"] = cks;
    json ocks = json::object();
    for (const auto& p : outputs) ocks[p] = hex64(fnv1a64_file(p));
    m["output_checksums"] = ocks;
    m["duration_ms"] = duration_ms;
    std::ofstream out(path);
    if (!out) throw ps::IoError("cannot write " + path);
    out << m.dump(2) << "\n";
}

ps::BandWeights parse_weights(const std::string& csv, int bands) {
    if (csv.empty()) return ps::BandWeights::uniform(bands);
    std::vector<double> w;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) w.push_back(std::stod(tok));
    if (static_cast<int>(w.size()) != bands)
        throw ps::ParameterError("--weights count does not match the band count");
    return ps::BandWeights::normalized(std::move(w));
}

ps::MultiScaleFilter resolve_bank(const std::string& gamma_file, int max_kernel) {
    if (!gamma_file.empty()) return ps::load_bank_file(gamma_file);
    return ps::make_bank(max_kernel);
}

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// ---- simulate ----------------------------------------------------------

int cmd_simulate(const std::string& kind, int size, int bands, int ratio,
                 std::uint64_t seed, double noise, double blur_sigma,
                 const std::string& weights_csv, const std::string& out_dir) {
    ManifestTimer timer;
    const ps::SceneKind k = ps::scene_kind_from_string(kind);
    const ps::Raster gt = ps::make_scene(k, size, size, bands, seed);
    ps::WaldConfig cfg;
    cfg.ratio = ratio;
    cfg.blur_sigma = blur_sigma;
    cfg.pan_weights = parse_weights(weights_csv, bands);
    cfg.noise_sigma = noise;
    cfg.noise_seed = seed ^ 0x5eedULL;
    const ps::Raster lr = ps::degrade(gt, cfg);
    const ps::Raster pan = ps::synth_pan(gt, cfg);
    const std::string gt_path = out_dir + "/gt.mbr";
    const std::string lr_path = out_dir + "/lr.mbr";
    const std::string pan_path = out_dir + "/pan.mbr";
    ps::write_mbr(gt, gt_path);
    ps::write_mbr(lr, lr_path);
    ps::write_mbr(pan, pan_path);
    json params = {{"kind", kind},
                   {"size", size},
                   {"bands", bands},
                   {"ratio", ratio},
                   {"seed", seed},
                   {"noise_sigma", noise},
                   {"blur_sigma", cfg.effective_sigma()},
                   {"pan_weights", cfg.pan_weights.weights}};
    write_manifest(out_dir + "/scene.json", "simulate", params, {},
                   {gt_path, lr_path, pan_path}, timer.ms());
    std::cout << "wrote " << gt_path << ", " << lr_path << ", " << pan_path << "\n";
    return 0;
}

// ---- sharpen -----------------------------------------------------------

int cmd_sharpen(const std::string& method, const std::string& lr_path,
                const std::string& pan_path, const std::string& out_path, int iters,
                int max_kernel, const std::string& gamma_file,
                const std::string& pan_gamma_file, const std::string& weights_csv,
                const std::string& trace_path, const std::string& intensity_path,
                double tol) {
    ManifestTimer timer;
    const ps::Raster L = ps::read_mbr(lr_path);
    const ps::Raster P = ps::read_mbr(pan_path);
    const ps::BandWeights w = parse_weights(weights_csv, L.bands);
    ps::Raster fused;
    std::optional<ps::FusionResult> arf_result;
    if (method == "arf") {
        const ps::MultiScaleFilter fb = resolve_bank(gamma_file, max_kernel);
        const ps::MultiScaleFilter gb =
            pan_gamma_file.empty() ? (gamma_file.empty() ? fb : ps::load_bank_file(gamma_file))
                                   : ps::load_bank_file(pan_gamma_file);
        ps::IterationConfig cfg;
        cfg.iterations = iters;
        cfg.residual_tolerance = tol;
        arf_result = ps::arf_fuse(L, P, fb, gb, w, cfg);
        fused = arf_result->fused;
    } else if (method == "ihs") {
        fused = ps::fuse_ihs(L, P, w);
    } else if (method == "brovey") {
        fused = ps::fuse_brovey(L, P, w);
    } else if (method == "gs") {
        fused = ps::fuse_gs(L, P, w);
    } else if (method == "sfim") {
        fused = ps::fuse_sfim(L, P, w);
    } else if (method == "upsample") {
        fused = ps::fuse_upsample(L, P);
    } else {
        throw ps::ParameterError("unknown method: " + method);
    }
    ps::write_mbr(fused, out_path);
    std::vector<std::string> outputs = {out_path};
    if (!trace_path.empty()) {
        if (!arf_result) throw ps::ParameterError("--trace requires --method arf");
        ps::write_trace_csv(arf_result->trace, trace_path);
        outputs.push_back(trace_path);
    }
    if (!intensity_path.empty()) {
        if (!arf_result) throw ps::ParameterError("--intensity-out requires --method arf");
        ps::write_mbr(arf_result->intensity_estimate, intensity_path);
        outputs.push_back(intensity_path);
    }
    json params = {{"method", method},       {"iters", iters},
                   {"max_kernel", max_kernel}, {"gamma_file", gamma_file},
                   {"pan_gamma_file", pan_gamma_file}, {"weights", weights_csv},
                   {"tolerance", tol}};
    write_manifest(out_path + ".manifest.json", "sharpen", params, {lr_path, pan_path},
                   outputs, timer.ms());
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

// ---- evaluate ----------------------------------------------------------

int cmd_evaluate(const std::string& fused_path, const std::string& gt_path,
                 const std::string& lr_path, const std::string& pan_path, int ratio,
                 double lambda, const std::string& weights_csv,
                 const std::string& json_path, const std::string& csv_path) {
    ManifestTimer timer;
    const ps::Raster fused = ps::read_mbr(fused_path);
    json rep;
    rep["psnr"] = nullptr;
    rep["ssim"] = nullptr;
    rep["sam"] = nullptr;
    rep["ergas"] = nullptr;
    rep["scc"] = nullptr;
    rep["q"] = nullptr;
    rep["d_lambda"] = nullptr;
    rep["d_s"] = nullptr;
    rep["qnr"] = nullptr;
    rep["l_r"] = nullptr;
    rep["l_s"] = nullptr;
    rep["l_sum"] = nullptr;
    double psnr_v = 0, ssim_v = 0, sam_v = 0, ergas_v = 0;
    bool have_ref = false;
    if (!gt_path.empty()) {
        have_ref = true;
        const ps::Raster gt = ps::read_mbr(gt_path);
        const ps::BandWeights w = parse_weights(weights_csv, gt.bands);
        psnr_v = ps::psnr(fused, gt);
        ssim_v = ps::ssim(fused, gt);
        ergas_v = ps::ergas(fused, gt, ratio);
        rep["psnr"] = std::isinf(psnr_v) ? ps::kPsnrTextCap : psnr_v;
        rep["ssim"] = ssim_v;
        rep["ergas"] = ergas_v;
        rep["scc"] = ps::scc(fused, gt);
        rep["q"] = ps::q_index(fused, gt);
        if (gt.bands >= 2) {
            sam_v = ps::sam(fused, gt);
            rep["sam"] = sam_v;
        }
        const ps::Raster fused_I = ps::intensity(fused, w);
        const ps::Raster gt_I = ps::intensity(gt, w);
        const ps::LossValues lv = ps::loss_values(fused, fused_I, gt, gt_I, lambda);
        rep["l_r"] = lv.l_r;
        rep["l_s"] = lv.l_s;
        rep["l_sum"] = lv.l_sum;
    }
    if (!lr_path.empty() && !pan_path.empty()) {
        const ps::Raster L = ps::read_mbr(lr_path);
        const ps::Raster P = ps::read_mbr(pan_path);
        const ps::QnrResult q = ps::qnr_suite(fused, L, P);
        if (q.d_lambda) rep["d_lambda"] = *q.d_lambda;
        rep["d_s"] = q.d_s;
        if (q.qnr) rep["qnr"] = *q.qnr;
    }
    rep["meta"] = {{"lambda", lambda},
                   {"ratio", ratio},
                   {"sam_units", "radians"},
                   {"ssim_window", 11},
                   {"q_window", 8},
                   {"psnr_text_cap_db", ps::kPsnrTextCap},
                   {"duration_ms", timer.ms()}};
    const std::string text = rep.dump(2);
    if (json_path.empty() || json_path == "-") std::cout << text << "\n";
    else {
        std::ofstream out(json_path);
        out << text << "\n";
        if (!out) throw ps::IoError("cannot write " + json_path);
    }
    if (!csv_path.empty()) {
        if (!have_ref)
            throw ps::ParameterError("--csv requires --gt (Table-style PSNR,SSIM,SAM,ERGAS row)");
        std::ofstream out(csv_path, std::ios::app);
        if (!out) throw ps::IoError("cannot write " + csv_path);
        out << fused_path << "," << fmt9(psnr_v) << "," << fmt9(ssim_v) << "," << fmt9(sam_v)
            << "," << fmt9(ergas_v) << "\n";
    }
    return 0;
}

// ---- verify ------------------------------------------------------------

int cmd_verify(int max_kernel, const std::string& gamma_file,
               const std::string& pan_gamma_file, int grid) {
    const ps::MultiScaleFilter fb = resolve_bank(gamma_file, max_kernel);
    bool ok = true;
    auto report = [&](const char* name, const ps::MultiScaleFilter& f) {
        const ps::ContractionReport r = ps::contraction_constant(f, grid, grid);
        const bool pass = r.c < 1.0;
        ok = ok && pass;
        std::cout << name << ": c = " << fmt9(r.c) << " on " << r.grid_w << "x" << r.grid_h
                  << " grid, peak at (" << r.peak_u << "," << r.peak_v << ") -> "
                  << (pass ? "PASS" : "FAIL") << "\n";
    };
    report("ms-branch", fb);
    if (!pan_gamma_file.empty()) report("pan-branch", ps::load_bank_file(pan_gamma_file));
    return ok ? 0 : 1;
}

// ---- tune --------------------------------------------------------------

int cmd_tune(const std::string& lr_path, const std::string& pan_path,
             const std::string& gt_path, int iters, int max_kernel, int budget,
             std::uint64_t seed, const std::string& weights_csv,
             const std::string& out_prefix) {
    ManifestTimer timer;
    const ps::Raster L = ps::read_mbr(lr_path);
    const ps::Raster P = ps::read_mbr(pan_path);
    const ps::Raster GT = ps::read_mbr(gt_path);
    const ps::BandWeights w = parse_weights(weights_csv, L.bands);
    const ps::MultiScaleFilter bank = ps::make_bank(max_kernel);
    ps::IterationConfig cfg;
    cfg.iterations = iters;
    const ps::TuneResult t = ps::tune_gammas(L, P, GT, bank, bank, w, cfg, budget, seed);
    const std::string f_path = out_prefix + "f.gamma";
    const std::string g_path = out_prefix + "g.gamma";
    ps::save_bank_file(t.f_bank, f_path);
    ps::save_bank_file(t.g_bank, g_path);
    json params = {{"iters", iters},   {"max_kernel", max_kernel},
                   {"budget", budget}, {"seed", seed},
                   {"initial_l_sum", t.initial_objective},
                   {"tuned_l_sum", t.best_objective},
                   {"evaluations", t.evaluations}};
    write_manifest(out_prefix + "tune.manifest.json", "tune", params,
                   {lr_path, pan_path, gt_path}, {f_path, g_path}, timer.ms());
    std::cout << "L_sum " << fmt9(t.initial_objective) << " -> " << fmt9(t.best_objective)
              << "; wrote " << f_path << ", " << g_path << "\n";
    return 0;
}

// ---- convert -----------------------------------------------------------

int cmd_convert(const std::string& in_path, const std::string& out_path, int band) {
    ps::Raster r;
    if (ends_with(in_path, ".mbr")) r = ps::read_mbr(in_path);
    else if (ends_with(in_path, ".pgm") || ends_with(in_path, ".ppm")) r = ps::read_pnm(in_path);
    else throw ps::ParameterError("convert: unsupported input extension");
    if (ends_with(out_path, ".mbr")) ps::write_mbr(r, out_path);
    else if (ends_with(out_path, ".pgm")) ps::write_pgm(r, band, out_path);
    else if (ends_with(out_path, ".ppm")) ps::write_ppm(r, out_path);
    else throw ps::ParameterError("convert: unsupported output extension");
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pansharp: alternating reverse-filtering pan-sharpening toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate a Wald-protocol scene");
    std::string sim_kind = "blobs", sim_weights, sim_out = ".";
    int sim_size = 128, sim_bands = 4, sim_ratio = 4;
    std::uint64_t sim_seed = 0;
    double sim_noise = 0.0, sim_blur = -1.0;
    sim->add_option("--kind", sim_kind, "gradient|checker|blobs|text");
    sim->add_option("--size", sim_size, "scene width and height");
    sim->add_option("--bands", sim_bands);
    sim->add_option("--ratio", sim_ratio, "resolution ratio");
    sim->add_option("--seed", sim_seed);
    sim->add_option("--noise", sim_noise, "LR noise sigma");
    sim->add_option("--blur-sigma", sim_blur, "Wald blur sigma (default ratio/2)");
    sim->add_option("--weights", sim_weights, "PAN synthesis weights, comma-separated");
    sim->add_option("--out-dir", sim_out);

    // sharpen
    auto* shp = app.add_subcommand("sharpen", "fuse LR MS with PAN");
    std::string shp_method = "arf", shp_lr, shp_pan, shp_out = "fused.mbr";
    std::string shp_gamma, shp_pan_gamma, shp_weights, shp_trace, shp_intensity;
    std::string shp_sigma_rule = "quarter";
    int shp_iters = 5, shp_max_kernel = 17;
    double shp_tol = 0.0;
    shp->add_option("--method", shp_method, "arf|ihs|brovey|gs|sfim|upsample");
    shp->add_option("--lr", shp_lr)->required();
    shp->add_option("--pan", shp_pan)->required();
    shp->add_option("--out", shp_out);
    shp->add_option("--iters", shp_iters, "outer iterations K");
    shp->add_option("--max-kernel", shp_max_kernel, "largest kernel size M");
    shp->add_option("--sigma-rule", shp_sigma_rule,
                    "kernel sigma rule (only 'quarter' is defined)")
        ->check(CLI::IsMember({"quarter"}));
    shp->add_option("--gamma-file", shp_gamma, "MS-branch bank configuration");
    shp->add_option("--pan-gamma-file", shp_pan_gamma, "PAN-branch bank configuration");
    shp->add_option("--weights", shp_weights, "intensity weights, comma-separated");
    shp->add_option("--trace", shp_trace, "iteration trace CSV path");
    shp->add_option("--intensity-out", shp_intensity, "estimated intensity MBR path");
    shp->add_option("--tol", shp_tol, "early-stop tolerance on successive change");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "quality metrics");
    std::string ev_fused, ev_gt, ev_lr, ev_pan, ev_weights, ev_json, ev_csv;
    int ev_ratio = 4;
    double ev_lambda = 0.1;
    ev->add_option("--fused", ev_fused)->required();
    ev->add_option("--gt", ev_gt);
    ev->add_option("--lr", ev_lr);
    ev->add_option("--pan", ev_pan);
    ev->add_option("--ratio", ev_ratio);
    ev->add_option("--lambda", ev_lambda);
    ev->add_option("--weights", ev_weights);
    ev->add_option("--json", ev_json, "JSON report path ('-' for stdout)");
    ev->add_option("--csv", ev_csv, "append a PSNR,SSIM,SAM,ERGAS row");

    // verify
    auto* ver = app.add_subcommand("verify", "contraction certificate");
    std::string ver_gamma, ver_pan_gamma, ver_sigma_rule = "quarter";
    int ver_max_kernel = 17, ver_grid = 64;
    ver->add_option("--max-kernel", ver_max_kernel);
    ver->add_option("--sigma-rule", ver_sigma_rule)->check(CLI::IsMember({"quarter"}));
    ver->add_option("--gamma-file", ver_gamma);
    ver->add_option("--pan-gamma-file", ver_pan_gamma);
    ver->add_option("--grid", ver_grid);

    // tune
    auto* tn = app.add_subcommand("tune", "calibrate gamma coefficients");
    std::string tn_lr, tn_pan, tn_gt, tn_weights, tn_prefix = "tuned_";
    int tn_iters = 5, tn_max_kernel = 17, tn_budget = 200;
    std::uint64_t tn_seed = 1;
    tn->add_option("--lr", tn_lr)->required();
    tn->add_option("--pan", tn_pan)->required();
    tn->add_option("--gt", tn_gt)->required();
    tn->add_option("--iters", tn_iters);
    tn->add_option("--max-kernel", tn_max_kernel);
    tn->add_option("--budget", tn_budget);
    tn->add_option("--seed", tn_seed);
    tn->add_option("--weights", tn_weights);
    tn->add_option("--out-prefix", tn_prefix);

    // convert
    auto* cv = app.add_subcommand("convert", "MBR <-> PGM/PPM");
    std::string cv_in, cv_out;
    int cv_band = 0;
    cv->add_option("--in", cv_in)->required();
    cv->add_option("--out", cv_out)->required();
    cv->add_option("--band", cv_band, "band index for PGM export");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(sim_kind, sim_size, sim_bands, sim_ratio, sim_seed, sim_noise,
                                sim_blur, sim_weights, sim_out);
        if (shp->parsed())
            return cmd_sharpen(shp_method, shp_lr, shp_pan, shp_out, shp_iters, shp_max_kernel,
                               shp_gamma, shp_pan_gamma, shp_weights, shp_trace, shp_intensity,
                               shp_tol);
        if (ev->parsed())
            return cmd_evaluate(ev_fused, ev_gt, ev_lr, ev_pan, ev_ratio, ev_lambda, ev_weights,
                                ev_json, ev_csv);
        if (ver->parsed()) return cmd_verify(ver_max_kernel, ver_gamma, ver_pan_gamma, ver_grid);
        if (tn->parsed())
            return cmd_tune(tn_lr, tn_pan, tn_gt, tn_iters, tn_max_kernel, tn_budget, tn_seed,
                            tn_weights, tn_prefix);
        if (cv->parsed()) return cmd_convert(cv_in, cv_out, cv_band);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
