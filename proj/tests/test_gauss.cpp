#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "naive_oracles.hpp"
#include "pansharp/gauss.hpp"

using ps::GaussianKernel;
using ps::MultiScaleFilter;
using ps::Raster;

TEST_CASE("make_gaussian") {
    SUBCASE("Dirac cases") {
        const GaussianKernel d1 = ps::make_gaussian(1, 0.0);
        CHECK(d1.taps.size() == 1);
        CHECK(d1.taps[0] == 1.0);
        CHECK(d1.is_dirac());
        const GaussianKernel d5 = ps::make_gaussian(5, 0.0);
        CHECK(d5.taps[2] == 1.0);
        CHECK(d5.is_dirac());
    }
    SUBCASE("normalization and center max") {
        const GaussianKernel k = ps::make_gaussian(3, 0.75);
        const auto g = k.grid();
        double sum = 0.0;
        for (double v : g) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        for (double v : g) CHECK(v <= g[4]);
        // Frozen closed-form value: normalized 1-D taps squared at the center.
        CHECK(g[4] == doctest::Approx(0.301159244118).epsilon(1e-10));
    }
    SUBCASE("5x5 sigma 1.25 center weight matches closed form") {
        const GaussianKernel k = ps::make_gaussian(5, 1.25);
        CHECK(k.grid()[12] == doctest::Approx(0.110493499690).epsilon(1e-10));
    }
    SUBCASE("grid symmetry") {
        const GaussianKernel k = ps::make_gaussian(7, 1.75);
        const auto g = k.grid();
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) {
                CHECK(g[i * 7 + j] == g[(6 - i) * 7 + j]);
                CHECK(g[i * 7 + j] == g[i * 7 + (6 - j)]);
                CHECK(g[i * 7 + j] == g[j * 7 + i]);
            }
    }
    SUBCASE("even size throws") {
        CHECK_THROWS_AS(ps::make_gaussian(4, 1.0), ps::ParameterError);
    }
}

TEST_CASE("convolve") {
    SUBCASE("Dirac kernel is bit-identical") {
        const Raster r = naive::random_raster(9, 9, 2, 3);
        CHECK(ps::convolve(r, ps::make_gaussian(1, 0.0)).samples == r.samples);
    }
    SUBCASE("DC preservation on constants") {
        Raster r = Raster::zeros(12, 10, 1);
        for (float& v : r.samples) v = 0.3f;
        const Raster out = ps::convolve(r, ps::make_gaussian(5, 1.25));
        for (float v : out.samples) CHECK(v == doctest::Approx(0.3).epsilon(1e-7));
    }
    SUBCASE("impulse stamps the kernel grid") {
        Raster r = Raster::zeros(7, 7, 1);
        r.at(3, 3, 0) = 1.0f;
        const GaussianKernel k = ps::make_gaussian(3, 0.75);
        const Raster out = ps::convolve(r, k);
        const auto g = k.grid();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                CHECK(out.at(3 + dx, 3 + dy, 0) ==
                      doctest::Approx(g[(dy + 1) * 3 + (dx + 1)]).epsilon(1e-7));
        CHECK(out.at(0, 0, 0) == 0.0f);
    }
}

TEST_CASE("apply_multiscale") {
    SUBCASE("degenerate Dirac mixture is identity") {
        MultiScaleFilter f = ps::make_bank(17);
        f.gammas.assign(9, 0.0);
        f.gammas[0] = 1.0;
        const Raster r = naive::random_raster(8, 8, 3, 5);
        CHECK(ps::apply_multiscale(r, f).samples == r.samples);
    }
    SUBCASE("constants are fixed points") {
        Raster r = Raster::zeros(20, 20, 2);
        for (float& v : r.samples) v = 0.42f;
        const Raster out = ps::apply_multiscale(r, ps::make_bank(17));
        for (float v : out.samples) CHECK(v == doctest::Approx(0.42).epsilon(1e-7));
    }
    SUBCASE("two-scale mixture matches direct summation") {
        const Raster r = naive::random_raster(8, 8, 1, 77);
        const MultiScaleFilter f = ps::make_bank(3, {0.5, 0.5});
        const Raster out = ps::apply_multiscale(r, f);
        const Raster g3 = ps::convolve(r, ps::make_gaussian(3, 0.75));
        for (std::size_t i = 0; i < out.samples.size(); ++i)
            CHECK(out.samples[i] ==
                  doctest::Approx(0.5 * r.samples[i] + 0.5 * g3.samples[i]).epsilon(1e-6));
    }
    SUBCASE("linearity") {
        const Raster X = naive::random_raster(10, 10, 1, 8);
        const Raster Y = naive::random_raster(10, 10, 1, 9);
        const MultiScaleFilter f = ps::make_bank(9);
        Raster Z = X;
        for (std::size_t i = 0; i < Z.samples.size(); ++i)
            Z.samples[i] = 0.25f * X.samples[i] + 0.75f * Y.samples[i];
        const Raster FZ = ps::apply_multiscale(Z, f);
        const Raster FX = ps::apply_multiscale(X, f);
        const Raster FY = ps::apply_multiscale(Y, f);
        for (std::size_t i = 0; i < FZ.samples.size(); ++i)
            CHECK(std::abs(FZ.samples[i] - (0.25 * FX.samples[i] + 0.75 * FY.samples[i])) < 1e-6);
    }
    SUBCASE("mean preservation on a non-constant image") {
        const Raster r = naive::random_raster(24, 24, 1, 13);
        const Raster out = ps::apply_multiscale(r, ps::make_bank(9));
        double m1 = 0, m2 = 0;
        for (std::size_t i = 0; i < r.samples.size(); ++i) {
            m1 += r.samples[i];
            m2 += out.samples[i];
        }
        CHECK(m1 / r.samples.size() == doctest::Approx(m2 / r.samples.size()).epsilon(1e-2));
    }
    SUBCASE("invalid gammas throw") {
        MultiScaleFilter f = ps::make_bank(5);
        f.gammas = {0.5, 0.6, -0.1};
        const Raster r = naive::random_raster(8, 8, 1, 1);
        CHECK_THROWS_AS(ps::apply_multiscale(r, f), ps::ParameterError);
    }
}

TEST_CASE("contraction_constant") {
    SUBCASE("Dirac filter has c = 0") {
        const auto rep = ps::contraction_constant(ps::make_gaussian(1, 0.0), 64, 64);
        CHECK(rep.c == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("default bank, uniform gammas (frozen oracle)") {
        const auto rep = ps::contraction_constant(ps::make_bank(17), 128, 128);
        CHECK(rep.c == doctest::Approx(0.887526192596).epsilon(1e-9));
        CHECK(rep.c < 1.0);
        const auto rep64 = ps::contraction_constant(ps::make_bank(17), 64, 64);
        CHECK(rep64.c == doctest::Approx(0.887526192596).epsilon(1e-9));
    }
    SUBCASE("c decreases when the Dirac share increases") {
        std::vector<double> heavy(9, 0.5 / 8.0);
        heavy[0] = 0.5;
        const auto rep = ps::contraction_constant(ps::make_bank(17, heavy), 128, 128);
        CHECK(rep.c == doctest::Approx(0.499233483335).epsilon(1e-9));
        CHECK(rep.c < ps::contraction_constant(ps::make_bank(17), 128, 128).c);
    }
    SUBCASE("two-scale bank (frozen oracle)") {
        const auto rep = ps::contraction_constant(ps::make_bank(3, {0.5, 0.5}), 64, 64);
        CHECK(rep.c == doctest::Approx(0.495241066627).epsilon(1e-9));
    }
    SUBCASE("grid smaller than kernel throws") {
        CHECK_THROWS_AS(ps::contraction_constant(ps::make_bank(17), 8, 8), ps::ParameterError);
    }
    SUBCASE("closed-form symbol agrees with a brute-force 2-D DFT") {
        // Independent oracle: DFT of the zero-padded centered kernel grid.
        const GaussianKernel k = ps::make_gaussian(7, 1.75);
        const int n = 32;
        const auto grid = k.grid();
        const auto rep = ps::contraction_constant(k, n, n);
        double worst = 0.0;
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u) {
                std::complex<double> acc = 0.0;
                for (int i = 0; i < 7; ++i)
                    for (int j = 0; j < 7; ++j) {
                        const double ph =
                            -2.0 * std::acos(-1.0) * (u * (j - 3.0) + v * (i - 3.0)) / n;
                        acc += grid[i * 7 + j] * std::complex<double>(std::cos(ph), std::sin(ph));
                    }
                worst = std::max(worst, std::abs(1.0 - acc.real()));
                CHECK(std::abs(acc.imag()) < 1e-12);
            }
        CHECK(rep.c == doctest::Approx(worst).epsilon(1e-9));
    }
}

TEST_CASE("empirical contraction bound") {
    // phi(X) = X + Y0 - F(X) must contract pairs at rate <= c.
    const MultiScaleFilter f = ps::make_bank(17);
    const double c = ps::contraction_constant(f, 32, 32).c;
    const Raster Y0 = naive::random_raster(32, 32, 1, 21);
    auto phi = [&](const Raster& X) {
        const Raster FX = ps::apply_multiscale(X, f);
        Raster out = X;
        for (std::size_t i = 0; i < out.samples.size(); ++i)
            out.samples[i] = X.samples[i] + Y0.samples[i] - FX.samples[i];
        return out;
    };
    auto dist = [](const Raster& a, const Raster& b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            const double d = static_cast<double>(a.samples[i]) - b.samples[i];
            acc += d * d;
        }
        return std::sqrt(acc);
    };
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Raster X = naive::random_raster(32, 32, 1, 100 + s);
        const Raster Y = naive::random_raster(32, 32, 1, 200 + s);
        CHECK(dist(phi(X), phi(Y)) <= (c + 1e-6) * dist(X, Y));
    }
}

TEST_CASE("bank configuration files") {
    SUBCASE("round trip") {
        const MultiScaleFilter f = ps::make_bank(9, {0.4, 0.0, 0.35, 0.15, 0.1});
        const std::string path = "test_gauss_bank.cfg";
        ps::save_bank_file(f, path);
        const MultiScaleFilter g = ps::load_bank_file(path);
        CHECK(g.max_size() == 9);
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(g.gammas[i] == doctest::Approx(f.gammas[i]).epsilon(1e-12));
        std::remove(path.c_str());
    }
    SUBCASE("defaults and negative gamma rejection") {
        const std::string path = "test_gauss_bad.cfg";
        {
            std::ofstream out(path);
            out << "M=5\ngamma_1=0.5\ngamma_5=-0.5\n";
        }
        CHECK_THROWS_AS(ps::load_bank_file(path), ps::IoError);
        {
            std::ofstream out(path);
            out << "# defaults only\nM=5\n";
        }
        const MultiScaleFilter f = ps::load_bank_file(path);
        CHECK(f.kernels.size() == 3);
        CHECK(f.gammas[0] == doctest::Approx(1.0 / 3.0));
        std::remove(path.c_str());
    }
}

// Known gap: the frequency response of a truncated, sampled Gaussian has
// small negative side lobes, so |1 - ghat| slightly exceeds 1 at mixed high
// frequencies for most lone kernels with sigma = size/4. The certification
// below is therefore expected to fail for sizes >= 5 (size 3 passes, and
// every shipped default bank passes because the Dirac member keeps the
// mixture spectrum positive). Kept as an executable record; see README.
TEST_CASE("lone-kernel certification (known gap)") {
    for (int size = 3; size <= 17; size += 2) {
        const auto rep = ps::contraction_constant(ps::make_gaussian(size, size / 4.0), 64, 64);
        INFO("size ", size, " c = ", rep.c);
        CHECK(rep.c < 1.0);
    }
    // Spot checks across the admissible sigma range.
    for (int size = 3; size <= 17; size += 2)
        for (double frac : {0.15, 0.25, 0.5}) {
            const auto rep =
                ps::contraction_constant(ps::make_gaussian(size, frac * size), 64, 64);
            INFO("size ", size, " sigma ", frac * size, " c = ", rep.c);
            CHECK(rep.c < 1.0);
        }
}
