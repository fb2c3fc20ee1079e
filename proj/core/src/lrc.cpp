#include "rrsense/lrc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rrsense/rsa.hpp"  // kRrMinBpm / kRrMaxBpm

namespace rrsense {

namespace {

constexpr std::size_t kMinFootsteps = 10;

std::vector<double> remove_mean(std::vector<double> v) {
    const double m = mean(v);
    for (double& x : v) x -= m;
    return v;
}

double channel_rr(const AudioWindow& w, ActivityClass cls,
                  const BreathingTemplate& tmpl, const LrcConfig& cfg,
                  LrcTrace* trace) {
    const PeakSet steps = detect_footsteps(w, cfg);
    const double sf = stride_frequency(steps, w.signal.duration());

    const Signal breath_band = breathing_band_filter(w, cls, cfg);
    // The 15 bin energies are relative to the processing band; carry them
    // over to the class band when it differs from the template's.
    const LrcParams band_params = params_for(cls, cfg);
    BreathingTemplate working = tmpl;
    working.band_low = band_params.band_low;
    working.band_high = band_params.band_high;
    const ProbabilityCurve curve =
        probability_curve(breath_band, working, cfg.probability_threshold);

    std::vector<double> series = curve.values;
    if (cfg.detrend_curve) series = remove_mean(std::move(series));

    const std::size_t L =
        std::max<std::size_t>(2, series.size() / cfg.ssa_window_divisor);
    const SsaDecomposition decomp =
        ssa_decompose(series, std::min(L, series.size() / 2), cfg.ssa_max_components);

    const LrcParams params = params_for(cls, cfg);
    const RrBounds bounds =
        lrc_rr_bounds(sf, w.signal.size(), w.signal.sample_rate, params);

    const std::vector<double> pattern =
        aggregate_components(decomp, bounds, curve.rate(), cfg);

    const std::size_t breaths = count_curve_peaks(pattern, curve.rate(), cfg);
    if (breaths == 0) throw low_quality_error("lrc: no breaths in aggregated pattern");

    if (trace) {
        trace->curve = curve;
        trace->breathing_pattern = pattern;
        trace->stride_freq = sf;
    }
    return static_cast<double>(breaths) * 60.0 / w.signal.duration();
}

}  // namespace

LrcParams params_for(ActivityClass cls, const LrcConfig& cfg) {
    switch (cls) {
        case ActivityClass::ActiveLow:
            return cfg.low_intensity;
        case ActivityClass::ActiveHigh:
            return cfg.high_intensity;
        default:
            throw parameter_error("params_for: activity class is not active");
    }
}

PeakSet detect_footsteps(const AudioWindow& w, const LrcConfig& cfg) {
    if (w.signal.duration() < 10.0)
        throw parameter_error("detect_footsteps: window shorter than 10 s");
    const Signal filtered = lowpass(w.signal, 50.0);
    PeakSet peaks = adaptive_peak_detect(filtered, cfg.footstep_ma_window,
                                         cfg.footstep_min_separation);
    if (peaks.size() < kMinFootsteps)
        throw low_quality_error("detect_footsteps: fewer than 10 peaks");
    return peaks;
}

double stride_frequency(const PeakSet& peaks, double duration) {
    if (peaks.size() < kMinFootsteps)
        throw parameter_error("stride_frequency: fewer than 10 peaks");
    if (!(duration > 0.0)) throw parameter_error("stride_frequency: bad duration");
    return static_cast<double>(peaks.size()) / duration;
}

Signal breathing_band_filter(const AudioWindow& w, ActivityClass cls,
                             const LrcConfig& cfg) {
    const LrcParams params = params_for(cls, cfg);
    if (w.signal.sample_rate < 2.0 * params.band_high)
        throw parameter_error("breathing_band_filter: sample rate below 2x band top");
    return bandpass(w.signal, params.band_low, params.band_high);
}

std::array<double, kTemplateBins> fft_features(const Signal& frame,
                                               double band_low, double band_high) {
    const PowerSpectrum spec = periodogram(frame);
    std::array<double, kTemplateBins> out{};
    const double bin_width = (band_high - band_low) / static_cast<double>(kTemplateBins);
    for (std::size_t i = 0; i < spec.freqs.size(); ++i) {
        const double f = spec.freqs[i];
        if (f < band_low || f >= band_high) continue;
        const std::size_t b = std::min<std::size_t>(
            kTemplateBins - 1,
            static_cast<std::size_t>((f - band_low) / bin_width));
        out[b] += spec.power[i];
    }
    return out;
}

BreathingTemplate build_breathing_template(const AudioWindow& reference,
                                           double band_low, double band_high) {
    const Signal& s = reference.signal;
    const std::size_t frame_n = static_cast<std::size_t>(std::lround(0.040 * s.sample_rate));
    const std::size_t hop_n = static_cast<std::size_t>(std::lround(0.020 * s.sample_rate));
    if (frame_n < 2 || s.size() < frame_n)
        throw parameter_error("build_breathing_template: reference too short");

    std::array<double, kTemplateBins> acc{};
    std::size_t frames = 0;
    for (std::size_t start = 0; start + frame_n <= s.size(); start += hop_n) {
        Signal frame;
        frame.sample_rate = s.sample_rate;
        frame.samples.assign(s.samples.begin() + static_cast<long>(start),
                             s.samples.begin() + static_cast<long>(start + frame_n));
        const auto feat = fft_features(frame, band_low, band_high);
        for (std::size_t b = 0; b < kTemplateBins; ++b) acc[b] += feat[b];
        ++frames;
    }

    double norm = 0.0;
    for (double v : acc) norm += v * v;
    norm = std::sqrt(norm);
    if (frames == 0 || norm == 0.0)
        throw low_quality_error("build_breathing_template: no breathing-band energy");

    BreathingTemplate tmpl;
    tmpl.band_low = band_low;
    tmpl.band_high = band_high;
    for (std::size_t b = 0; b < kTemplateBins; ++b) tmpl.features[b] = acc[b] / norm;
    return tmpl;
}

ProbabilityCurve probability_curve(const Signal& s, const BreathingTemplate& tmpl,
                                   double threshold) {
    if (!(threshold >= 0.0) || !(threshold < 1.0))
        throw parameter_error("probability_curve: threshold outside [0, 1)");

    ProbabilityCurve curve;
    const std::size_t frame_n =
        static_cast<std::size_t>(std::lround(curve.frame_len * s.sample_rate));
    const std::size_t hop_n =
        static_cast<std::size_t>(std::lround(curve.frame_hop * s.sample_rate));
    if (frame_n < 2 || s.size() < frame_n)
        throw parameter_error("probability_curve: signal shorter than one frame");

    const std::vector<double> tv(tmpl.features.begin(), tmpl.features.end());
    for (std::size_t start = 0; start + frame_n <= s.size(); start += hop_n) {
        Signal frame;
        frame.sample_rate = s.sample_rate;
        frame.samples.assign(s.samples.begin() + static_cast<long>(start),
                             s.samples.begin() + static_cast<long>(start + frame_n));
        const auto feat = fft_features(frame, tmpl.band_low, tmpl.band_high);
        double ssq = 0.0;
        for (double v : feat) ssq += v * v;
        double p = 0.0;
        if (ssq > 0.0) {
            const double sim =
                cosine_similarity(std::vector<double>(feat.begin(), feat.end()), tv);
            if (sim > threshold) p = (sim - threshold) / (1.0 - threshold);
        }
        curve.values.push_back(p);
    }
    return curve;
}

RrBounds lrc_rr_bounds(double stride_freq, std::size_t n_samples, double fs,
                       const LrcParams& params) {
    if (!(stride_freq > 0.0)) throw parameter_error("lrc_rr_bounds: stride_freq <= 0");
    const double window_s = static_cast<double>(n_samples) / fs;
    const double steps_per_window = stride_freq * window_s;

    RrBounds b;
    b.rr_min = steps_per_window / params.lrc_max;
    b.rr_max = steps_per_window / params.lrc_min;
    // intersect with the human RR range, expressed as breaths per window
    b.rr_min = std::max(b.rr_min, kRrMinBpm * window_s / 60.0);
    b.rr_max = std::min(b.rr_max, kRrMaxBpm * window_s / 60.0);
    if (!(b.rr_min < b.rr_max))
        throw low_quality_error("lrc_rr_bounds: empty plausible RR range");
    return b;
}

std::size_t count_curve_peaks(const std::vector<double>& component, double rate,
                              const LrcConfig& cfg) {
    if (component.size() < 2) return 0;
    std::vector<double> smoothed = component;
    const std::size_t smooth_n = static_cast<std::size_t>(
        std::lround(cfg.curve_smooth_window * rate));
    if (smooth_n > 1)
        smoothed = moving_average(smoothed, std::min(smooth_n, smoothed.size()));
    const std::size_t win = std::min<std::size_t>(
        smoothed.size(),
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.curve_ma_window * rate))));
    const std::vector<double> thr = moving_average(smoothed, win);
    const double min_sep = 60.0 / kRrMaxBpm;  // one breath at the fastest plausible RR
    return threshold_roi_peaks(smoothed, thr, rate, min_sep).size();
}

std::vector<double> aggregate_components(const SsaDecomposition& decomp,
                                         const RrBounds& bounds, double curve_rate,
                                         const LrcConfig& cfg) {
    std::vector<double> sum;
    std::size_t kept = 0;
    for (const auto& comp : decomp.components) {
        const double n_peaks =
            static_cast<double>(count_curve_peaks(comp, curve_rate, cfg));
        if (n_peaks < bounds.rr_min || n_peaks > bounds.rr_max) continue;
        if (sum.empty()) sum.assign(comp.size(), 0.0);
        for (std::size_t i = 0; i < comp.size(); ++i) sum[i] += comp[i];
        ++kept;
    }
    if (kept == 0)
        throw low_quality_error("aggregate_components: no breathing-related components");
    return sum;
}

RrEstimate estimate_rr_lrc(const std::optional<AudioWindow>& left,
                           const std::optional<AudioWindow>& right,
                           ActivityClass cls, const BreathingTemplate& tmpl,
                           const LrcConfig& cfg, LrcTrace* trace) {
    if (cls != ActivityClass::ActiveLow && cls != ActivityClass::ActiveHigh)
        throw parameter_error("estimate_rr_lrc: activity class is not active");

    RrEstimate est;
    est.pipeline = PipelineKind::Lrc;
    est.activity = cls;

    for (const auto* w : {left ? &*left : nullptr, right ? &*right : nullptr}) {
        if (!w) continue;
        try {
            est.channel_rr.push_back(channel_rr(*w, cls, tmpl, cfg, trace));
        } catch (const low_quality_error&) {
        } catch (const parameter_error&) {
        }
    }

    if (est.channel_rr.empty()) {
        est.valid = false;
        return est;
    }
    est.rr_bpm = mean(est.channel_rr);
    est.valid = true;
    return est;
}

void save_template(const BreathingTemplate& tmpl, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parameter_error("save_template: cannot open " + path);
    char buf[64];
    std::snprintf(buf, sizeof buf, "band %.17g %.17g\n", tmpl.band_low, tmpl.band_high);
    out << buf;
    for (std::size_t i = 0; i < kTemplateBins; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g%c", tmpl.features[i],
                      i + 1 == kTemplateBins ? '\n' : ' ');
        out << buf;
    }
}

BreathingTemplate load_template(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parameter_error("load_template: cannot open " + path);
    std::string tag;
    BreathingTemplate tmpl;
    if (!(in >> tag >> tmpl.band_low >> tmpl.band_high) || tag != "band")
        throw parameter_error("load_template: malformed band header in " + path);
    for (std::size_t i = 0; i < kTemplateBins; ++i) {
        if (!(in >> tmpl.features[i]))
            throw parameter_error("load_template: expected 15 values in " + path);
    }
    return tmpl;
}

}  // namespace rrsense
