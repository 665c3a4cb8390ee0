#include <cmath>
#include <random>

#include "arcrom/loads.hpp"
#include "arcrom/rng.hpp"
#include "doctest.h"

using namespace arcrom;
using namespace arcrom::loads;

TEST_CASE("OASPL definition") {
    CHECK(oaspl(Vec::Constant(100, 20e-6)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(oaspl(Vec::Constant(100, 316.97736)) == doctest::Approx(144.0).epsilon(1e-4));
    const Vec s = Vec::Constant(50, 0.3);
    CHECK(oaspl(Vec(2.0 * s)) - oaspl(s) == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("pressure synthesis hits the target OASPL and is deterministic") {
    LoadSpec spec;
    spec.oaspl_db = 144.0;
    spec.cutoff_hz = 500.0;
    spec.filter_order = 12;
    spec.dt = 4.167e-5;
    spec.duration = 2.0;
    spec.seed = 7;
    const Vec a = gen_pressure(spec);
    const double rms = std::sqrt(a.squaredNorm() / a.size());
    CHECK(rms == doctest::Approx(20e-6 * std::pow(10.0, 7.2)).epsilon(1e-10));
    CHECK(std::abs(oaspl(a) - 144.0) <= 0.1);

    const Vec b = gen_pressure(spec);
    CHECK((a - b).norm() == 0.0);

    spec.seed = 8;
    CHECK((gen_pressure(spec) - a).norm() > 0.0);
}

TEST_CASE("synthesized pressure spectrum is flat in band and drops after cutoff") {
    LoadSpec spec;
    spec.oaspl_db = 144.0;
    spec.cutoff_hz = 500.0;
    spec.filter_order = 12;
    spec.dt = 4.167e-5;
    spec.duration = 10.0;
    spec.seed = 99;
    const Vec a = gen_pressure(spec);
    const double fs = 1.0 / spec.dt;
    const auto [freqs, psd] = welch_psd(a, fs, 9000, 0.5);
    CHECK(freqs[1] - freqs[0] == doctest::Approx(fs / 9000.0).epsilon(1e-14));

    // Passband level: mean over [0, 0.8 fc].
    double level = 0.0;
    int count = 0;
    for (long k = 0; k < freqs.size(); ++k) {
        if (freqs[k] <= 0.8 * spec.cutoff_hz) {
            level += psd[k];
            ++count;
        }
    }
    level /= count;
    for (long k = 1; k < freqs.size(); ++k) {  // skip DC (window leakage bin)
        if (freqs[k] <= 0.8 * spec.cutoff_hz) {
            CHECK(std::abs(10.0 * std::log10(psd[k] / level)) <= 3.0);
        }
    }
    // Stopband: at least 40 dB below the passband at 2 fc.
    for (long k = 0; k < freqs.size(); ++k) {
        if (freqs[k] >= 2.0 * spec.cutoff_hz && freqs[k] <= 2.2 * spec.cutoff_hz) {
            CHECK(10.0 * std::log10(psd[k] / level) <= -40.0);
        }
    }
}

TEST_CASE("Welch PSD of a pure sinusoid satisfies Parseval") {
    const double fs = 8192.0;
    const double amp = 2.0;
    const double f0 = 160.0;  // on-bin for segment 1024
    const long n = 1 << 16;
    Vec x(n);
    for (long i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * M_PI * f0 * i / fs);
    const auto [freqs, psd] = welch_psd(x, fs, 1024, 0.5);
    const double df = freqs[1] - freqs[0];
    const double integrated = psd.sum() * df;
    CHECK(integrated == doctest::Approx(amp * amp / 2.0).epsilon(0.02));
}

TEST_CASE("Welch PSD of white noise is flat at sigma^2 / (fs/2)") {
    std::mt19937_64 rng(123);
    const double sigma = 0.7;
    const long n = 1 << 18;
    Vec x(n);
    for (long i = 0; i < n; ++i) x[i] = sigma * arcrom::util::gaussian(rng);
    const double fs = 1000.0;
    const auto [freqs, psd] = welch_psd(x, fs, 1024, 0.5);
    const double expected = sigma * sigma / (fs / 2.0);
    // Mean level over interior bins.
    double mean = 0.0;
    for (long k = 1; k + 1 < psd.size(); ++k) mean += psd[k];
    mean /= static_cast<double>(psd.size() - 2);
    CHECK(mean == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("load spec validation") {
    LoadSpec spec;
    spec.dt = 1e-3;
    spec.cutoff_hz = 600.0;  // above Nyquist = 500
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.cutoff_hz = 100.0;
    spec.filter_order = 5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.filter_order = 4;
    CHECK_NOTHROW(spec.validate());
}
