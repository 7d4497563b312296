#include "pansharp/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace ps {

bool GaussianKernel::is_dirac() const {
    const int r = (size - 1) / 2;
    return size == 1 || taps[r] == 1.0;
}

std::vector<double> GaussianKernel::grid() const {
    std::vector<double> g(static_cast<std::size_t>(size) * size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            g[static_cast<std::size_t>(i) * size + j] = taps[i] * taps[j];
    return g;
}

double GaussianKernel::symbol(double omega) const {
    const int r = (size - 1) / 2;
    double s = 0.0;
    for (int t = 0; t < size; ++t) s += taps[t] * std::cos((t - r) * omega);
    return s;
}

GaussianKernel make_gaussian(int size, double sigma) {
    if (size < 1 || size % 2 == 0) throw ParameterError("kernel size must be odd and >= 1");
    if (sigma < 0.0) throw ParameterError("kernel sigma must be >= 0");
    GaussianKernel k;
    k.size = size;
    k.sigma = sigma;
    k.taps.assign(size, 0.0);
    const int r = (size - 1) / 2;
    if (size == 1 || sigma == 0.0) {
        k.taps[r] = 1.0;
        return k;
    }
    double sum = 0.0;
    for (int t = 0; t < size; ++t) {
        const double d = t - r;
        k.taps[t] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        sum += k.taps[t];
    }
    for (double& v : k.taps) v /= sum;
    return k;
}

namespace {

// Separable reflect-boundary convolution of all bands, double precision.
void conv_separable(const Raster& r, const std::vector<double>& taps,
                    std::vector<double>& out) {
    const int n = static_cast<int>(taps.size());
    const int rad = (n - 1) / 2;
    const std::size_t plane = static_cast<std::size_t>(r.width) * r.height;
    out.assign(r.samples.size(), 0.0);
    std::vector<double> tmp(plane);
    std::vector<int> xi(static_cast<std::size_t>(r.width) * n);
    std::vector<int> yi(static_cast<std::size_t>(r.height) * n);
    for (int x = 0; x < r.width; ++x)
        for (int t = 0; t < n; ++t)
            xi[static_cast<std::size_t>(x) * n + t] = reflect_index(x + t - rad, r.width);
    for (int y = 0; y < r.height; ++y)
        for (int t = 0; t < n; ++t)
            yi[static_cast<std::size_t>(y) * n + t] = reflect_index(y + t - rad, r.height);
    for (int b = 0; b < r.bands; ++b) {
        const float* src = &r.samples[b * plane];
        // Horizontal pass.
        for (int y = 0; y < r.height; ++y) {
            const float* row = src + static_cast<std::size_t>(y) * r.width;
            double* trow = &tmp[static_cast<std::size_t>(y) * r.width];
            for (int x = 0; x < r.width; ++x) {
                const int* idx = &xi[static_cast<std::size_t>(x) * n];
                double acc = 0.0;
                for (int t = 0; t < n; ++t) acc += taps[t] * row[idx[t]];
                trow[x] = acc;
            }
        }
        // Vertical pass.
        double* dst = &out[b * plane];
        for (int y = 0; y < r.height; ++y) {
            const int* idx = &yi[static_cast<std::size_t>(y) * n];
            for (int x = 0; x < r.width; ++x) {
                double acc = 0.0;
                for (int t = 0; t < n; ++t)
                    acc += taps[t] * tmp[static_cast<std::size_t>(idx[t]) * r.width + x];
                dst[static_cast<std::size_t>(y) * r.width + x] = acc;
            }
        }
    }
}

}  // namespace

Raster convolve(const Raster& r, const GaussianKernel& k) {
    if (k.is_dirac()) return r;
    std::vector<double> acc;
    conv_separable(r, k.taps, acc);
    Raster out = Raster::zeros(r.width, r.height, r.bands);
    for (std::size_t i = 0; i < acc.size(); ++i)
        out.samples[i] = static_cast<float>(acc[i]);
    return out;
}

void MultiScaleFilter::validate() const {
    if (kernels.empty() || kernels.size() != gammas.size())
        throw ParameterError("filter bank: kernel/gamma count mismatch");
    if (kernels.front().size != 1)
        throw ParameterError("filter bank: sizes must start at 1");
    double sum = 0.0;
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        if (kernels[i].size % 2 == 0)
            throw ParameterError("filter bank: kernel sizes must be odd");
        if (i > 0 && kernels[i].size <= kernels[i - 1].size)
            throw ParameterError("filter bank: kernel sizes must be strictly increasing");
        if (!(gammas[i] >= 0.0))
            throw ParameterError("filter bank: gammas must be non-negative");
        sum += gammas[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ParameterError("filter bank: gammas must sum to 1");
}

int MultiScaleFilter::max_size() const {
    return kernels.empty() ? 0 : kernels.back().size;
}

bool MultiScaleFilter::is_identity() const {
    for (std::size_t i = 0; i < kernels.size(); ++i)
        if (gammas[i] != 0.0 && !kernels[i].is_dirac()) return false;
    return true;
}

MultiScaleFilter make_bank(int max_size) {
    if (max_size < 1 || max_size % 2 == 0)
        throw ParameterError("bank max size must be odd and >= 1");
    MultiScaleFilter f;
    for (int s = 1; s <= max_size; s += 2)
        f.kernels.push_back(make_gaussian(s, s == 1 ? 0.0 : s / 4.0));
    f.gammas.assign(f.kernels.size(), 1.0 / f.kernels.size());
    return f;
}

MultiScaleFilter make_bank(int max_size, const std::vector<double>& gammas) {
    MultiScaleFilter f = make_bank(max_size);
    if (gammas.size() != f.kernels.size())
        throw ParameterError("bank gamma count does not match kernel count");
    f.gammas = gammas;
    f.validate();
    return f;
}

Raster apply_multiscale(const Raster& r, const MultiScaleFilter& f) {
    f.validate();
    if (f.is_identity()) return r;
    std::vector<double> total(r.samples.size(), 0.0);
    std::vector<double> one;
    for (std::size_t i = 0; i < f.kernels.size(); ++i) {
        const double g = f.gammas[i];
        if (g == 0.0) continue;
        if (f.kernels[i].is_dirac()) {
            for (std::size_t p = 0; p < total.size(); ++p) total[p] += g * r.samples[p];
        } else {
            conv_separable(r, f.kernels[i].taps, one);
            for (std::size_t p = 0; p < total.size(); ++p) total[p] += g * one[p];
        }
    }
    Raster out = Raster::zeros(r.width, r.height, r.bands);
    for (std::size_t p = 0; p < total.size(); ++p)
        out.samples[p] = static_cast<float>(total[p]);
    return out;
}

namespace {

ContractionReport contraction_impl(const std::vector<const GaussianKernel*>& kernels,
                                   const std::vector<double>& gammas, int grid_w,
                                   int grid_h) {
    int max_size = 1;
    for (const auto* k : kernels) max_size = std::max(max_size, k->size);
    if (grid_w < max_size || grid_h < max_size)
        throw ParameterError("contraction grid smaller than the largest kernel");
    const double two_pi = 2.0 * std::acos(-1.0);
    // Precompute per-kernel 1-D symbols along each grid axis.
    std::vector<std::vector<double>> su(kernels.size()), sv(kernels.size());
    for (std::size_t k = 0; k < kernels.size(); ++k) {
        su[k].resize(grid_w);
        for (int u = 0; u < grid_w; ++u) su[k][u] = kernels[k]->symbol(two_pi * u / grid_w);
        sv[k].resize(grid_h);
        for (int v = 0; v < grid_h; ++v) sv[k][v] = kernels[k]->symbol(two_pi * v / grid_h);
    }
    ContractionReport rep;
    rep.grid_w = grid_w;
    rep.grid_h = grid_h;
    for (int v = 0; v < grid_h; ++v) {
        for (int u = 0; u < grid_w; ++u) {
            double ghat = 0.0;
            for (std::size_t k = 0; k < kernels.size(); ++k)
                ghat += gammas[k] * su[k][u] * sv[k][v];
            const double dev = std::abs(1.0 - ghat);
            if (dev > rep.c) {
                rep.c = dev;
                rep.peak_u = u;
                rep.peak_v = v;
            }
        }
    }
    return rep;
}

}  // namespace

ContractionReport contraction_constant(const MultiScaleFilter& f, int grid_w, int grid_h) {
    f.validate();
    std::vector<const GaussianKernel*> ks;
    for (const auto& k : f.kernels) ks.push_back(&k);
    return contraction_impl(ks, f.gammas, grid_w, grid_h);
}

ContractionReport contraction_constant(const GaussianKernel& k, int grid_w, int grid_h) {
    return contraction_impl({&k}, {1.0}, grid_w, grid_h);
}

// ---- Bank configuration files ------------------------------------------

MultiScaleFilter load_bank_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    int max_size = 17;
    std::string sigma_rule = "quarter";
    std::map<int, double> sigmas, gammas;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // Trim whitespace.
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError(path + ": malformed line " + std::to_string(line_no));
        const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        try {
            if (key == "M") max_size = std::stoi(val);
            else if (key == "sigma_rule") sigma_rule = val;
            else if (key.rfind("sigma_", 0) == 0) sigmas[std::stoi(key.substr(6))] = std::stod(val);
            else if (key.rfind("gamma_", 0) == 0) gammas[std::stoi(key.substr(6))] = std::stod(val);
            else throw IoError(path + ": unknown key " + key);
        } catch (const std::invalid_argument&) {
            throw IoError(path + ": malformed value at line " + std::to_string(line_no));
        }
    }
    if (sigma_rule != "quarter")
        throw IoError(path + ": unknown sigma_rule " + sigma_rule);
    if (max_size < 1 || max_size % 2 == 0)
        throw IoError(path + ": M must be odd and >= 1");
    MultiScaleFilter f;
    std::vector<double> g;
    for (int s = 1; s <= max_size; s += 2) {
        double sigma = s == 1 ? 0.0 : s / 4.0;
        if (auto it = sigmas.find(s); it != sigmas.end()) sigma = it->second;
        if (sigma < 0.0) throw IoError(path + ": negative sigma for size " + std::to_string(s));
        f.kernels.push_back(make_gaussian(s, sigma));
        g.push_back(gammas.empty() ? 1.0 : 0.0);
    }
    if (!gammas.empty()) {
        double sum = 0.0;
        for (const auto& [size, val] : gammas) {
            if (val < 0.0)
                throw IoError(path + ": negative gamma for size " + std::to_string(size));
            int idx = -1;
            for (std::size_t i = 0; i < f.kernels.size(); ++i)
                if (f.kernels[i].size == size) idx = static_cast<int>(i);
            if (idx < 0)
                throw IoError(path + ": gamma for size " + std::to_string(size) +
                              " outside the bank");
            g[idx] = val;
            sum += val;
        }
        if (sum <= 0.0) throw IoError(path + ": gammas must have a positive sum");
        for (double& v : g) v /= sum;
    } else {
        for (double& v : g) v /= f.kernels.size();
    }
    f.gammas = std::move(g);
    f.validate();
    return f;
}

void save_bank_file(const MultiScaleFilter& f, const std::string& path) {
    f.validate();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "M=" << f.max_size() << "\n";
    out << "sigma_rule=quarter\n";
    char buf[64];
    for (std::size_t i = 0; i < f.kernels.size(); ++i) {
        const int s = f.kernels[i].size;
        const double def = s == 1 ? 0.0 : s / 4.0;
        if (f.kernels[i].sigma != def) {
            std::snprintf(buf, sizeof buf, "%.17g", f.kernels[i].sigma);
            out << "sigma_" << s << "=" << buf << "\n";
        }
        std::snprintf(buf, sizeof buf, "%.17g", f.gammas[i]);
        out << "gamma_" << s << "=" << buf << "\n";
    }
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace ps
