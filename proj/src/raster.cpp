#include "pansharp/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ps {

Raster Raster::zeros(int width, int height, int bands) {
    if (width < 1 || height < 1 || bands < 1)
        throw ParameterError("raster dimensions must be positive");
    Raster r;
    r.width = width;
    r.height = height;
    r.bands = bands;
    r.samples.assign(static_cast<std::size_t>(width) * height * bands, 0.0f);
    return r;
}

void Raster::ensure_finite(const std::string& context) const {
    for (float v : samples)
        if (!std::isfinite(v))
            throw NumericError("non-finite sample in " + context);
}

BandWeights BandWeights::uniform(int bands) {
    if (bands < 1) throw ParameterError("band count must be >= 1");
    BandWeights w;
    w.weights.assign(bands, 1.0 / bands);
    return w;
}

BandWeights BandWeights::normalized(std::vector<double> raw) {
    double sum = 0.0;
    for (double v : raw) {
        if (!(v >= 0.0)) throw ParameterError("band weights must be non-negative");
        sum += v;
    }
    if (sum <= 0.0) throw ParameterError("band weights must have a positive sum");
    for (double& v : raw) v /= sum;
    BandWeights w;
    w.weights = std::move(raw);
    return w;
}

void BandWeights::validate() const {
    if (weights.empty()) throw ParameterError("band weights are empty");
    double sum = 0.0;
    for (double v : weights) {
        if (!(v >= 0.0)) throw ParameterError("band weights must be non-negative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ParameterError("band weights must sum to 1");
}

int reflect_index(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

Raster intensity(const Raster& ms, const BandWeights& w) {
    if (ms.bands != w.size())
        throw DimensionError("intensity: band count does not match weight count");
    Raster out = Raster::zeros(ms.width, ms.height, 1);
    const std::size_t plane = static_cast<std::size_t>(ms.width) * ms.height;
    for (std::size_t p = 0; p < plane; ++p) {
        double acc = 0.0;
        for (int b = 0; b < ms.bands; ++b)
            acc += w.weights[b] * ms.samples[b * plane + p];
        out.samples[p] = static_cast<float>(acc);
    }
    return out;
}

Raster replace_intensity(const Raster& ms, const Raster& old_I, const Raster& new_I) {
    if (old_I.bands != 1 || new_I.bands != 1)
        throw DimensionError("replace_intensity: intensity rasters must be single-band");
    if (!old_I.same_plane(ms) || !new_I.same_plane(ms))
        throw DimensionError("replace_intensity: dimension mismatch");
    Raster out = ms;
    const std::size_t plane = static_cast<std::size_t>(ms.width) * ms.height;
    for (std::size_t p = 0; p < plane; ++p) {
        const double delta = static_cast<double>(new_I.samples[p]) - old_I.samples[p];
        for (int b = 0; b < ms.bands; ++b) {
            std::size_t i = b * plane + p;
            out.samples[i] = static_cast<float>(ms.samples[i] + delta);
        }
    }
    return out;
}

namespace {

// Catmull-Rom cubic weight (a = -0.5).
double cubic_weight(double t) {
    constexpr double a = -0.5;
    t = std::abs(t);
    if (t < 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
    if (t < 2.0) return a * (((t - 5.0) * t + 8.0) * t - 4.0);
    return 0.0;
}

struct CubicTaps {
    int base[4];
    double w[4];
};

std::vector<CubicTaps> cubic_taps(int out_n, int in_n, int factor) {
    std::vector<CubicTaps> taps(out_n);
    for (int o = 0; o < out_n; ++o) {
        const double s = (o + 0.5) / factor - 0.5;
        const int i0 = static_cast<int>(std::floor(s));
        const double t = s - i0;
        CubicTaps ct;
        for (int d = 0; d < 4; ++d) {
            ct.base[d] = reflect_index(i0 - 1 + d, in_n);
            ct.w[d] = cubic_weight(t - (d - 1));
        }
        taps[o] = ct;
    }
    return taps;
}

}  // namespace

Raster upsample(const Raster& r, int factor) {
    if (factor < 1) throw ParameterError("upsample: factor must be >= 1");
    if (factor == 1) return r;
    const int ow = r.width * factor, oh = r.height * factor;
    Raster out = Raster::zeros(ow, oh, r.bands);
    const auto ty = cubic_taps(oh, r.height, factor);
    const auto tx = cubic_taps(ow, r.width, factor);
    std::vector<double> rows(static_cast<std::size_t>(oh) * r.width);
    for (int b = 0; b < r.bands; ++b) {
        // Vertical pass into a double-precision intermediate, then horizontal.
        for (int y = 0; y < oh; ++y) {
            const CubicTaps& c = ty[y];
            for (int x = 0; x < r.width; ++x) {
                double acc = 0.0;
                for (int d = 0; d < 4; ++d) acc += c.w[d] * r.at(x, c.base[d], b);
                rows[static_cast<std::size_t>(y) * r.width + x] = acc;
            }
        }
        for (int y = 0; y < oh; ++y) {
            const double* row = &rows[static_cast<std::size_t>(y) * r.width];
            for (int x = 0; x < ow; ++x) {
                const CubicTaps& c = tx[x];
                double acc = 0.0;
                for (int d = 0; d < 4; ++d) acc += c.w[d] * row[c.base[d]];
                out.at(x, y, b) = static_cast<float>(acc);
            }
        }
    }
    return out;
}

Raster downsample(const Raster& r, int factor) {
    if (factor < 1) throw ParameterError("downsample: factor must be >= 1");
    if (factor == 1) return r;
    if (r.width % factor != 0 || r.height % factor != 0)
        throw DimensionError("downsample: dimensions not divisible by factor");
    Raster out = Raster::zeros(r.width / factor, r.height / factor, r.bands);
    for (int b = 0; b < r.bands; ++b)
        for (int y = 0; y < out.height; ++y)
            for (int x = 0; x < out.width; ++x)
                out.at(x, y, b) = r.at(x * factor, y * factor, b);
    return out;
}

// ---- File I/O ----------------------------------------------------------

Raster read_mbr(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string magic;
    if (!std::getline(in, magic) || magic != "MBR1")
        throw IoError(path + ": not an MBR1 file");
    long width = -1, height = -1, bands = -1;
    bool f32 = false;
    std::string line;
    while (std::getline(in, line) && !line.empty()) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError(path + ": malformed header line");
        const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "width") width = std::stol(val);
        else if (key == "height") height = std::stol(val);
        else if (key == "bands") bands = std::stol(val);
        else if (key == "dtype") f32 = (val == "f32le");
        else throw IoError(path + ": unknown header key " + key);
    }
    if (width < 1 || height < 1 || bands < 1 || !f32)
        throw IoError(path + ": incomplete or unsupported MBR header");
    Raster r = Raster::zeros(static_cast<int>(width), static_cast<int>(height),
                             static_cast<int>(bands));
    static_assert(sizeof(float) == 4);
    in.read(reinterpret_cast<char*>(r.samples.data()),
            static_cast<std::streamsize>(r.samples.size() * 4));
    if (static_cast<std::size_t>(in.gcount()) != r.samples.size() * 4)
        throw IoError(path + ": truncated sample data");
    return r;
}

void write_mbr(const Raster& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "MBR1\n"
        << "width=" << r.width << "\n"
        << "height=" << r.height << "\n"
        << "bands=" << r.bands << "\n"
        << "dtype=f32le\n\n";
    out.write(reinterpret_cast<const char*>(r.samples.data()),
              static_cast<std::streamsize>(r.samples.size() * 4));
    if (!out) throw IoError("write failed for " + path);
}

namespace {

unsigned char quantize8(float v) {
    const double c = std::clamp(static_cast<double>(v), 0.0, 1.0);
    return static_cast<unsigned char>(std::lround(255.0 * c));
}

}  // namespace

void write_pgm(const Raster& r, int band, const std::string& path) {
    if (band < 0 || band >= r.bands) throw ParameterError("write_pgm: band out of range");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << r.width << " " << r.height << "\n255\n";
    for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x)
            out.put(static_cast<char>(quantize8(r.at(x, y, band))));
    if (!out) throw IoError("write failed for " + path);
}

void write_ppm(const Raster& r, const std::string& path) {
    if (r.bands < 3) throw ParameterError("write_ppm: needs at least 3 bands");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P6\n" << r.width << " " << r.height << "\n255\n";
    for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x)
            for (int b = 0; b < 3; ++b)
                out.put(static_cast<char>(quantize8(r.at(x, y, b))));
    if (!out) throw IoError("write failed for " + path);
}

Raster read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string magic;
    in >> magic;
    int bands;
    if (magic == "P5") bands = 1;
    else if (magic == "P6") bands = 3;
    else throw IoError(path + ": unsupported PNM magic " + magic);
    int width = 0, height = 0, maxval = 0;
    in >> width >> height >> maxval;
    in.get();  // single whitespace after maxval
    if (width < 1 || height < 1 || maxval < 1 || maxval > 255)
        throw IoError(path + ": unsupported PNM header");
    Raster r = Raster::zeros(width, height, bands);
    std::vector<unsigned char> buf(static_cast<std::size_t>(width) * height * bands);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size())
        throw IoError(path + ": truncated PNM data");
    std::size_t i = 0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (int b = 0; b < bands; ++b)
                r.at(x, y, b) = static_cast<float>(buf[i++]) / maxval;
    return r;
}

}  // namespace ps
