#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "arcrom/types.hpp"

namespace arcrom::loads {

constexpr double kReferencePressure = 20e-6;  // Pa

/// Band-limited random pressure amplitude specification.
struct LoadSpec {
    double oaspl_db = 144.0;
    double cutoff_hz = 500.0;
    int filter_order = 12;     // even, >= 2
    double dt = 4.167e-5;      // s
    double duration = 10.0;    // s
    std::uint64_t seed = 0;

    void validate() const;
};

/// Second-order section of a digital IIR filter.
struct Biquad {
    double b0, b1, b2;  // numerator
    double a1, a2;      // denominator (a0 normalized to 1)
};

/// Low-pass Butterworth as a cascade of biquads (bilinear transform with
/// cutoff pre-warping).
std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double sample_rate_hz);

/// Zero-phase (forward-backward) filtering with odd-extension padding.
Vec filtfilt(const std::vector<Biquad>& sections, const Vec& x);

/// Gaussian white samples -> zero-phase Butterworth low-pass -> rescaled so
/// the RMS matches the target OASPL.
Vec gen_pressure(const LoadSpec& spec);

/// Welch PSD: Hann window, averaged one-sided periodograms with density
/// scaling. Returns (frequencies, psd); frequency resolution fs/segment_len.
std::pair<Vec, Vec> welch_psd(const Vec& series, double sample_rate_hz, int segment_len,
                              double overlap_frac = 0.5);

/// 20 log10(rms / 20 uPa).
double oaspl(const Vec& series);

}  // namespace arcrom::loads
