#ifndef RRSENSE_DSP_HPP
#define RRSENSE_DSP_HPP

#include <complex>
#include <vector>

#include "rrsense/types.hpp"

namespace rrsense {

// Radix-2 FFT, in place. Length must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& v, bool inverse);
std::size_t next_pow2(std::size_t n);

// Zero-phase band-pass. Passband [low, high] is preserved exactly; the
// response rolls off with a raised-cosine taper over `transition_octaves`
// on each side and is exactly zero beyond it. low = 0 degenerates to a
// pure low-pass (DC kept).
Signal bandpass(const Signal& s, double low, double high,
                double transition_octaves = 1.5);
Signal lowpass(const Signal& s, double cutoff, double transition_octaves = 1.5);

// Magnitude of the analytic signal, smoothed with a centered moving
// average of `smooth_window` seconds.
Signal hilbert_envelope(const Signal& s, double smooth_window);

// Envelope-based peak picking with a moving-average adaptive threshold:
// regions of interest between consecutive envelope/threshold intersections,
// one peak per ROI at the ROI maximum, kept if it exceeds both enclosing
// intersection amplitudes and peaks are >= min_separation apart.
PeakSet adaptive_peak_detect(const Signal& s, double ma_window,
                             double min_separation,
                             double envelope_smooth = 0.05);

// Same ROI/threshold logic applied to a raw series (no Hilbert envelope);
// used for peak counting on oscillating probability-curve components.
PeakSet threshold_roi_peaks(const std::vector<double>& y,
                            const std::vector<double>& threshold,
                            double rate, double min_separation);

// Frequency of the largest-magnitude FFT bin inside [band_lo, band_hi],
// after mean removal; zero-padded so bin spacing <= 0.005 Hz.
double dominant_frequency(const Signal& s, double band_lo, double band_hi);

// Rate implied by zero crossings: (crossings / 2) per minute.
double zero_crossing_rr(const Signal& s);

struct PowerSpectrum {
    std::vector<double> freqs;  // Hz
    std::vector<double> power;  // mean-square power per bin; sums to signal power

    double total_power() const;
    double band_power(double lo, double hi) const;
};

PowerSpectrum periodogram(const Signal& frame);

std::vector<double> moving_average(const std::vector<double>& s, std::size_t window);
std::vector<double> minmax_normalize(const std::vector<double>& v);
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

double mean(const std::vector<double>& v);
double stddev(const std::vector<double>& v);

}  // namespace rrsense

#endif
