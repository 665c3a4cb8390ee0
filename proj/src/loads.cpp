#include "arcrom/loads.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "arcrom/rng.hpp"

namespace arcrom::loads {

void LoadSpec::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("load: dt must be positive");
    if (!(duration > 0.0)) throw std::invalid_argument("load: duration must be positive");
    if (!(cutoff_hz > 0.0) || cutoff_hz >= 0.5 / dt) {
        throw std::invalid_argument("load: cutoff must lie below the Nyquist frequency");
    }
    if (filter_order < 2 || filter_order % 2 != 0) {
        throw std::invalid_argument("load: filter order must be even and >= 2");
    }
    if (!std::isfinite(oaspl_db)) throw std::invalid_argument("load: OASPL must be finite");
}

std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double sample_rate_hz) {
    if (order < 2 || order % 2 != 0) {
        throw std::invalid_argument("butterworth: order must be even and >= 2");
    }
    if (!(cutoff_hz > 0.0) || cutoff_hz >= 0.5 * sample_rate_hz) {
        throw std::invalid_argument("butterworth: cutoff must lie below Nyquist");
    }
    const double k = 2.0 * sample_rate_hz;
    const double warped = k * std::tan(M_PI * cutoff_hz / sample_rate_hz);
    std::vector<Biquad> sections;
    sections.reserve(order / 2);
    for (int s = 0; s < order / 2; ++s) {
        // Conjugate analog pole pair at angle theta from the negative real axis.
        const double theta = M_PI * (2.0 * s + 1.0) / (2.0 * order);
        const double a1s = 2.0 * warped * std::sin(theta);  // s^2 + a1s s + w^2
        const double a0s = warped * warped;
        const double norm = k * k + a1s * k + a0s;
        Biquad bq;
        bq.b0 = a0s / norm;
        bq.b1 = 2.0 * a0s / norm;
        bq.b2 = a0s / norm;
        bq.a1 = (2.0 * a0s - 2.0 * k * k) / norm;
        bq.a2 = (k * k - a1s * k + a0s) / norm;
        sections.push_back(bq);
    }
    return sections;
}

namespace {

void filter_in_place(const std::vector<Biquad>& sections, Vec& x) {
    for (const Biquad& s : sections) {
        double w1 = 0.0, w2 = 0.0;  // direct form II transposed state
        for (long i = 0; i < x.size(); ++i) {
            const double in = x[i];
            const double out = s.b0 * in + w1;
            w1 = s.b1 * in - s.a1 * out + w2;
            w2 = s.b2 * in - s.a2 * out;
            x[i] = out;
        }
    }
}

}  // namespace

Vec filtfilt(const std::vector<Biquad>& sections, const Vec& x) {
    const long n = x.size();
    if (n < 2) return x;
    // Generous settling pad for the odd extension; 100 samples per biquad
    // covers cutoff ratios down to about fs/100.
    const long pad = std::min<long>(n - 1, 100L * static_cast<long>(sections.size()));
    Vec ext(n + 2 * pad);
    // Odd extension about the end points.
    for (long i = 0; i < pad; ++i) ext[i] = 2.0 * x[0] - x[pad - i];
    ext.segment(pad, n) = x;
    for (long i = 0; i < pad; ++i) ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];

    filter_in_place(sections, ext);
    ext.reverseInPlace();
    filter_in_place(sections, ext);
    ext.reverseInPlace();
    return ext.segment(pad, n);
}

Vec gen_pressure(const LoadSpec& spec) {
    spec.validate();
    const long n = static_cast<long>(std::llround(spec.duration / spec.dt));
    if (n < 2) throw std::invalid_argument("load: duration too short for the time step");
    std::mt19937_64 rng(spec.seed);
    Vec white(n);
    for (long i = 0; i < n; ++i) white[i] = util::gaussian(rng);
    const auto sections = butterworth_lowpass(spec.filter_order, spec.cutoff_hz, 1.0 / spec.dt);
    Vec filtered = filtfilt(sections, white);
    const double rms = std::sqrt(filtered.squaredNorm() / static_cast<double>(n));
    const double target = kReferencePressure * std::pow(10.0, spec.oaspl_db / 20.0);
    filtered *= target / rms;
    return filtered;
}

std::pair<Vec, Vec> welch_psd(const Vec& series, double sample_rate_hz, int segment_len,
                              double overlap_frac) {
    if (segment_len < 2 || segment_len > series.size()) {
        throw std::invalid_argument("welch: bad segment length");
    }
    if (!(overlap_frac >= 0.0) || overlap_frac >= 1.0) {
        throw std::invalid_argument("welch: overlap must be in [0,1)");
    }
    const long n = series.size();
    const long hop = std::max<long>(1, static_cast<long>(std::llround(segment_len * (1.0 - overlap_frac))));
    // Periodic Hann window.
    Vec window(segment_len);
    double window_power = 0.0;
    for (int i = 0; i < segment_len; ++i) {
        window[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / segment_len);
        window_power += window[i] * window[i];
    }

    const int n_bins = segment_len / 2 + 1;
    Vec psd = Vec::Zero(n_bins);
    long segments = 0;
    Eigen::FFT<double> fft;
    std::vector<double> buf(segment_len);
    std::vector<std::complex<double>> spectrum;
    for (long start = 0; start + segment_len <= n; start += hop) {
        for (int i = 0; i < segment_len; ++i) buf[i] = series[start + i] * window[i];
        fft.fwd(spectrum, buf);
        for (int k = 0; k < n_bins; ++k) {
            const double mag2 = std::norm(spectrum[k]);
            const bool interior = k != 0 && !(segment_len % 2 == 0 && k == n_bins - 1);
            psd[k] += (interior ? 2.0 : 1.0) * mag2;
        }
        ++segments;
    }
    if (segments == 0) throw std::invalid_argument("welch: series shorter than a segment");
    psd /= static_cast<double>(segments) * sample_rate_hz * window_power;

    const double df = sample_rate_hz / segment_len;
    Vec freqs(n_bins);
    for (int k = 0; k < n_bins; ++k) freqs[k] = k * df;
    return {std::move(freqs), std::move(psd)};
}

double oaspl(const Vec& series) {
    const double rms = std::sqrt(series.squaredNorm() / static_cast<double>(series.size()));
    return 20.0 * std::log10(rms / kReferencePressure);
}

}  // namespace arcrom::loads
