#ifndef RRSENSE_LRC_HPP
#define RRSENSE_LRC_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rrsense/dsp.hpp"
#include "rrsense/ssa.hpp"
#include "rrsense/types.hpp"

namespace rrsense {

inline constexpr std::size_t kTemplateBins = 15;

struct BreathingTemplate {
    std::array<double, kTemplateBins> features{};  // unit Euclidean norm
    double band_low = 0.0;
    double band_high = 0.0;
};

struct ProbabilityCurve {
    std::vector<double> values;  // per-frame probability in [0, 1]
    double frame_hop = 0.020;    // seconds
    double frame_len = 0.040;

    double rate() const { return 1.0 / frame_hop; }
};

struct LrcParams {
    double lrc_min = 1.9;  // steps per breath
    double lrc_max = 4.9;
    double band_low = 300.0;
    double band_high = 1800.0;
};

// Breath events per estimation window.
struct RrBounds {
    double rr_min = 0.0;
    double rr_max = 0.0;
};

struct LrcConfig {
    double probability_threshold = 0.6;  // T
    double footstep_ma_window = 1.5;
    double footstep_min_separation = 0.2;
    LrcParams low_intensity{1.9, 4.9, 300.0, 1800.0};
    LrcParams high_intensity{1.8, 5.6, 2000.0, 9000.0};
    std::size_t ssa_max_components = 15;
    std::size_t ssa_window_divisor = 4;  // window_length = curve length / divisor
    bool detrend_curve = true;           // mean removal before SSA
    double curve_ma_window = 4.0;        // peak-count threshold MA, seconds
    double curve_smooth_window = 0.25;   // pre-count smoothing, seconds
};

LrcParams params_for(ActivityClass cls, const LrcConfig& cfg);

PeakSet detect_footsteps(const AudioWindow& w, const LrcConfig& cfg = {});
double stride_frequency(const PeakSet& peaks, double duration);
Signal breathing_band_filter(const AudioWindow& w, ActivityClass cls,
                             const LrcConfig& cfg = {});
std::array<double, kTemplateBins> fft_features(const Signal& frame,
                                               double band_low, double band_high);
BreathingTemplate build_breathing_template(const AudioWindow& reference,
                                           double band_low, double band_high);
ProbabilityCurve probability_curve(const Signal& s, const BreathingTemplate& tmpl,
                                   double threshold);
RrBounds lrc_rr_bounds(double stride_freq, std::size_t n_samples, double fs,
                       const LrcParams& params);
// Keeps components whose peak count lies inside [rr_min, rr_max] and sums
// them; throws low_quality_error when nothing survives.
std::vector<double> aggregate_components(const SsaDecomposition& decomp,
                                         const RrBounds& bounds, double curve_rate,
                                         const LrcConfig& cfg = {});

// Counts peaks of a probability-curve component against a moving-average
// threshold with breath-scale minimum separation.
std::size_t count_curve_peaks(const std::vector<double>& component, double rate,
                              const LrcConfig& cfg = {});

struct LrcTrace {
    ProbabilityCurve curve;
    std::vector<double> breathing_pattern;
    double stride_freq = 0.0;
};

RrEstimate estimate_rr_lrc(const std::optional<AudioWindow>& left,
                           const std::optional<AudioWindow>& right,
                           ActivityClass cls, const BreathingTemplate& tmpl,
                           const LrcConfig& cfg = {}, LrcTrace* trace = nullptr);

// Template file: "band <low> <high>" header line then 15 whitespace-separated
// values; round-trips bit-exactly.
void save_template(const BreathingTemplate& tmpl, const std::string& path);
BreathingTemplate load_template(const std::string& path);

}  // namespace rrsense

#endif
