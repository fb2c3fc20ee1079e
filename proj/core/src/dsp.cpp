#include "rrsense/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rrsense {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Even-symmetric reflection index for padding past the signal end.
std::size_t reflect_index(std::size_t i, std::size_t n) {
    if (n == 1) return 0;
    const std::size_t period = 2 * (n - 1);
    std::size_t j = i % period;
    return j < n ? j : period - j;
}

std::vector<std::complex<double>> padded_spectrum(const std::vector<double>& x,
                                                  std::size_t m) {
    std::vector<std::complex<double>> v(m);
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < m; ++i) v[i] = x[reflect_index(i, n)];
    fft_inplace(v, false);
    return v;
}

// Raised-cosine roll-off in log-frequency: 1 inside the passband, 0 beyond
// `octaves` past the edge.
double edge_taper(double f, double edge, double octaves, bool upper) {
    if (f <= 0.0) return upper ? 1.0 : 0.0;
    const double x = std::log2(f / edge) / octaves;  // signed octaves past edge
    const double t = upper ? x : -x;
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    return 0.5 * (1.0 + std::cos(kPi * t));
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

void fft_inplace(std::vector<std::complex<double>>& v, bool inverse) {
    const std::size_t n = v.size();
    if (n < 2) return;
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = v[i + k];
                const std::complex<double> t = v[i + k + len / 2] * w;
                v[i + k] = u + t;
                v[i + k + len / 2] = u - t;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& c : v) c *= inv;
    }
}

Signal bandpass(const Signal& s, double low, double high, double transition_octaves) {
    const double nyquist = s.sample_rate / 2.0;
    if (!(low >= 0.0) || !(low < high) || !(high <= nyquist))
        throw parameter_error("bandpass: need 0 <= low < high <= Nyquist");
    if (s.samples.empty()) return s;

    const std::size_t n = s.samples.size();
    const std::size_t m = next_pow2(2 * n);
    auto spec = padded_spectrum(s.samples, m);

    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t kk = k <= m / 2 ? k : m - k;  // folded bin
        const double f = static_cast<double>(kk) * s.sample_rate / static_cast<double>(m);
        double h = edge_taper(f, high, transition_octaves, true);
        if (low > 0.0) {
            h *= (f == 0.0) ? 0.0 : edge_taper(f, low, transition_octaves, false);
        }
        spec[k] *= h;
    }
    fft_inplace(spec, true);

    Signal out;
    out.sample_rate = s.sample_rate;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = spec[i].real();
    return out;
}

Signal lowpass(const Signal& s, double cutoff, double transition_octaves) {
    if (!(cutoff > 0.0) || !(cutoff < s.sample_rate / 2.0))
        throw parameter_error("lowpass: cutoff must lie in (0, Nyquist)");
    return bandpass(s, 0.0, cutoff, transition_octaves);
}

Signal hilbert_envelope(const Signal& s, double smooth_window) {
    if (s.samples.empty()) throw parameter_error("hilbert_envelope: empty signal");
    if (smooth_window < 0.0) throw parameter_error("hilbert_envelope: negative window");

    const std::size_t n = s.samples.size();
    const std::size_t m = next_pow2(2 * n);
    auto spec = padded_spectrum(s.samples, m);
    // analytic signal: zero negative frequencies, double positive ones
    for (std::size_t k = 1; k < m / 2; ++k) spec[k] *= 2.0;
    for (std::size_t k = m / 2 + 1; k < m; ++k) spec[k] = 0.0;
    fft_inplace(spec, true);

    std::vector<double> env(n);
    for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(spec[i]);

    const std::size_t win =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(smooth_window * s.sample_rate)));
    Signal out;
    out.sample_rate = s.sample_rate;
    out.samples = moving_average(env, std::min(win, n));
    return out;
}

PeakSet threshold_roi_peaks(const std::vector<double>& y,
                            const std::vector<double>& threshold,
                            double rate, double min_separation) {
    const std::size_t n = y.size();
    std::vector<std::size_t> crossings;
    for (std::size_t i = 1; i < n; ++i) {
        const bool above_prev = y[i - 1] > threshold[i - 1];
        const bool above_now = y[i] > threshold[i];
        if (above_prev != above_now) crossings.push_back(i);
    }

    struct Candidate {
        std::size_t index;
        double amplitude;
    };
    std::vector<Candidate> cands;
    for (std::size_t c = 0; c + 1 < crossings.size(); ++c) {
        const std::size_t lo = crossings[c];
        const std::size_t hi = crossings[c + 1];
        if (!(y[lo] > threshold[lo])) continue;  // ROI only where above threshold
        std::size_t best = lo;
        for (std::size_t i = lo; i < hi; ++i)
            if (y[i] > y[best]) best = i;
        if (y[best] > y[lo == 0 ? 0 : lo - 1] && y[best] > y[hi]) {
            cands.push_back({best, y[best]});
        }
    }

    // enforce minimum separation, keeping the taller peak
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) {
                         return a.amplitude > b.amplitude;
                     });
    const double min_sep_samples = min_separation * rate;
    std::vector<std::size_t> kept;
    for (const auto& c : cands) {
        bool ok = true;
        for (std::size_t k : kept) {
            const double d = k > c.index ? static_cast<double>(k - c.index)
                                         : static_cast<double>(c.index - k);
            if (d < min_sep_samples) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(c.index);
    }
    std::sort(kept.begin(), kept.end());

    PeakSet out;
    out.indices = kept;
    out.times.reserve(kept.size());
    for (std::size_t i : kept) out.times.push_back(static_cast<double>(i) / rate);
    return out;
}

PeakSet adaptive_peak_detect(const Signal& s, double ma_window,
                             double min_separation, double envelope_smooth) {
    if (!(ma_window > 0.0)) throw parameter_error("adaptive_peak_detect: ma_window <= 0");
    if (min_separation < 0.0)
        throw parameter_error("adaptive_peak_detect: negative min_separation");
    if (s.duration() < ma_window)
        throw parameter_error("adaptive_peak_detect: signal shorter than ma_window");

    const Signal env = hilbert_envelope(s, envelope_smooth);
    const std::size_t win = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(ma_window * s.sample_rate)));
    const std::vector<double> thr = moving_average(env.samples, win);
    return threshold_roi_peaks(env.samples, thr, s.sample_rate, min_separation);
}

double dominant_frequency(const Signal& s, double band_lo, double band_hi) {
    if (s.samples.empty()) throw parameter_error("dominant_frequency: empty signal");
    const double nyquist = s.sample_rate / 2.0;
    band_lo = std::max(band_lo, 0.0);
    band_hi = std::min(band_hi, nyquist);
    if (!(band_lo < band_hi))
        throw parameter_error("dominant_frequency: empty band after restriction");

    const std::size_t n = s.samples.size();
    const double m = mean(s.samples);
    const std::size_t padded = next_pow2(16 * n);
    std::vector<std::complex<double>> spec(padded, 0.0);
    for (std::size_t i = 0; i < n; ++i) spec[i] = s.samples[i] - m;
    fft_inplace(spec, false);

    const double df = s.sample_rate / static_cast<double>(padded);
    std::size_t k_lo = static_cast<std::size_t>(std::ceil(band_lo / df));
    std::size_t k_hi = static_cast<std::size_t>(std::floor(band_hi / df));
    k_hi = std::min(k_hi, padded / 2);
    if (k_lo > k_hi) throw parameter_error("dominant_frequency: band narrower than resolution");

    std::size_t best = k_lo;
    double best_mag = -1.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const double mag = std::abs(spec[k]);
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    return static_cast<double>(best) * df;
}

double zero_crossing_rr(const Signal& s) {
    const std::size_t n = s.samples.size();
    if (n < 2 || s.sample_rate <= 0.0) return 0.0;
    std::size_t crossings = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if ((s.samples[i - 1] < 0.0 && s.samples[i] >= 0.0) ||
            (s.samples[i - 1] >= 0.0 && s.samples[i] < 0.0))
            ++crossings;
    }
    const double minutes = s.duration() / 60.0;
    if (minutes <= 0.0) return 0.0;
    return (static_cast<double>(crossings) / 2.0) / minutes;
}

double PowerSpectrum::total_power() const {
    return std::accumulate(power.begin(), power.end(), 0.0);
}

double PowerSpectrum::band_power(double lo, double hi) const {
    double p = 0.0;
    for (std::size_t i = 0; i < freqs.size(); ++i)
        if (freqs[i] >= lo && freqs[i] <= hi) p += power[i];
    return p;
}

PowerSpectrum periodogram(const Signal& frame) {
    const std::size_t n = frame.samples.size();
    if (n < 2) throw parameter_error("periodogram: frame length < 2");

    const std::size_t m = next_pow2(n);
    std::vector<std::complex<double>> spec(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) spec[i] = frame.samples[i];
    fft_inplace(spec, false);

    // One-sided; scaled so the bins sum to the mean-square signal power.
    PowerSpectrum out;
    const std::size_t half = m / 2;
    out.freqs.resize(half + 1);
    out.power.resize(half + 1);
    const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(n));
    for (std::size_t k = 0; k <= half; ++k) {
        out.freqs[k] = static_cast<double>(k) * frame.sample_rate / static_cast<double>(m);
        double p = std::norm(spec[k]) * scale;
        if (k != 0 && k != half) p *= 2.0;
        out.power[k] = p;
    }
    return out;
}

std::vector<double> moving_average(const std::vector<double>& s, std::size_t window) {
    const std::size_t n = s.size();
    if (window < 1 || window > n)
        throw parameter_error("moving_average: window out of range");
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + s[i];

    // centered, truncated at the edges
    const std::size_t half_lo = (window - 1) / 2;
    const std::size_t half_hi = window / 2;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half_lo ? i - half_lo : 0;
        const std::size_t hi = std::min(n - 1, i + half_hi);
        out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<double> minmax_normalize(const std::vector<double>& v) {
    if (v.empty()) throw parameter_error("minmax_normalize: empty input");
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    std::vector<double> out(v.size(), 0.0);
    const double range = *mx - *mn;
    if (range == 0.0) return out;  // constant input -> all zeros
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *mn) / range;
    return out;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw parameter_error("cosine_similarity: length mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0)
        throw parameter_error("cosine_similarity: zero vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace rrsense
