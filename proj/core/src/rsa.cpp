#include "rrsense/rsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rrsense/types.hpp"

namespace rrsense {

namespace {

constexpr std::size_t kMinHeartbeatPeaks = 8;
constexpr double kMaxRemovedFraction = 0.30;
// Fixed HF band of the HRV used only to seed the candidate search.
constexpr double kSeedBandLow = 0.15;
constexpr double kSeedBandHigh = 0.35;

std::vector<std::size_t> local_minima(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    const std::size_t n = v.size();
    if (n == 0) return out;
    if (n == 1) {
        out.push_back(0);
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = (i == 0) || v[i] < v[i - 1];
        const bool right_ok = (i == n - 1) || v[i] < v[i + 1];
        if (left_ok && right_ok) out.push_back(i);
    }
    return out;
}

Signal candidate_band_filter(const IbiSeries& hrv, double candidate_bpm) {
    const double lo = 0.65 * candidate_bpm / 60.0;
    const double hi = 1.35 * candidate_bpm / 60.0;
    const double nyquist = hrv.resampled.sample_rate / 2.0;
    return bandpass(hrv.resampled, lo, std::min(hi, nyquist * 0.999));
}

std::vector<double> remove_mean(std::vector<double> v) {
    const double m = mean(v);
    for (double& x : v) x -= m;
    return v;
}

}  // namespace

PeakSet detect_heartbeats(const AudioWindow& w, const RsaConfig& cfg) {
    if (w.signal.duration() < 10.0)
        throw parameter_error("detect_heartbeats: window shorter than 10 s");
    if (w.signal.sample_rate < 100.0)
        throw parameter_error("detect_heartbeats: sample rate below 100 Hz");

    const Signal filtered = lowpass(w.signal, 30.0);
    PeakSet peaks = adaptive_peak_detect(filtered, cfg.heartbeat_ma_window,
                                         cfg.heartbeat_min_separation);
    if (peaks.size() < kMinHeartbeatPeaks)
        throw low_quality_error("detect_heartbeats: fewer than 8 peaks");
    return peaks;
}

IbiSeries compute_hrv(const PeakSet& peaks, double resample_rate) {
    if (peaks.size() < kMinHeartbeatPeaks)
        throw low_quality_error("compute_hrv: fewer than 8 peaks");

    IbiSeries out;
    const std::size_t n_raw = peaks.times.size() - 1;
    std::size_t removed = 0;
    double prev = peaks.times.front();
    out.beat_times.push_back(prev);
    for (std::size_t i = 1; i < peaks.times.size(); ++i) {
        const double dt = peaks.times[i] - prev;
        if (dt < kIbiMin) {
            // spurious extra beat: drop it, keep accumulating toward the next
            ++removed;
            continue;
        }
        if (dt > kIbiMax) {
            // missed-beat gap: restart from this beat without an interval
            ++removed;
            prev = peaks.times[i];
            out.beat_times.push_back(prev);
            continue;
        }
        out.intervals.push_back(dt);
        out.beat_times.push_back(peaks.times[i]);
        prev = peaks.times[i];
    }

    if (n_raw == 0 || static_cast<double>(removed) / static_cast<double>(n_raw) > kMaxRemovedFraction)
        throw low_quality_error("compute_hrv: too many implausible intervals");
    if (out.intervals.size() < 2)
        throw low_quality_error("compute_hrv: too few intervals");

    // interval-vs-time: interval i is attached to the time of its closing beat
    std::vector<double> t;
    t.reserve(out.intervals.size());
    {
        double p = out.beat_times.front();
        for (std::size_t i = 1; i < out.beat_times.size(); ++i) {
            const double dt = out.beat_times[i] - p;
            if (dt >= kIbiMin && dt <= kIbiMax) t.push_back(out.beat_times[i]);
            p = out.beat_times[i];
        }
    }
    if (t.size() != out.intervals.size())
        throw low_quality_error("compute_hrv: inconsistent interval timeline");

    const double t0 = t.front();
    const double t1 = t.back();
    const double step = 1.0 / resample_rate;
    out.resampled.sample_rate = resample_rate;
    std::size_t seg = 0;
    for (double tt = t0; tt <= t1 + 1e-12; tt += step) {
        while (seg + 1 < t.size() && t[seg + 1] < tt) ++seg;
        if (seg + 1 >= t.size()) {
            out.resampled.samples.push_back(out.intervals.back());
            continue;
        }
        const double a = t[seg], b = t[seg + 1];
        const double frac = b > a ? std::clamp((tt - a) / (b - a), 0.0, 1.0) : 0.0;
        out.resampled.samples.push_back(out.intervals[seg] +
                                        frac * (out.intervals[seg + 1] - out.intervals[seg]));
    }
    return out;
}

const IbiSeries& select_channel(const std::optional<IbiSeries>& left,
                                const std::optional<IbiSeries>& right) {
    if (!left && !right) throw low_quality_error("select_channel: both channels invalid");
    if (left && !right) return *left;
    if (right && !left) return *right;
    const double sl = stddev(left->intervals);
    const double sr = stddev(right->intervals);
    return sr < sl ? *right : *left;  // tie goes to the left channel
}

InterferenceMap detect_interference(const AudioWindow& w, double threshold_factor,
                                    double segment_length) {
    InterferenceMap map;
    map.segment_length = segment_length;
    const std::size_t seg_samples =
        static_cast<std::size_t>(std::lround(segment_length * w.signal.sample_rate));
    if (seg_samples == 0 || w.signal.size() < 2 * seg_samples)
        throw parameter_error("detect_interference: window shorter than 2 segments");

    const std::size_t n_segments = w.signal.size() / seg_samples;
    for (std::size_t i = 0; i < n_segments; ++i) {
        std::vector<double> seg(w.signal.samples.begin() + static_cast<long>(i * seg_samples),
                                w.signal.samples.begin() + static_cast<long>((i + 1) * seg_samples));
        map.std_per_segment.push_back(stddev(seg));
    }

    std::vector<double> sorted = map.std_per_segment;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.size() % 2 == 1
                              ? sorted[sorted.size() / 2]
                              : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);

    for (double sd : map.std_per_segment)
        map.flagged.push_back(sd > threshold_factor * median);
    return map;
}

Signal rls_filter(const Signal& segment, const Signal& reference,
                  int order, double forgetting, double delta) {
    if (segment.size() != reference.size())
        throw parameter_error("rls_filter: length mismatch");
    const std::size_t n = segment.size();
    const std::size_t m = static_cast<std::size_t>(order);

    // with no clean reference there is nothing to restore from
    bool all_zero = true;
    for (double v : reference.samples)
        if (v != 0.0) {
            all_zero = false;
            break;
        }
    if (all_zero) return segment;

    std::vector<double> wgt(m, 0.0);
    std::vector<double> P(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) P[i * m + i] = delta;

    std::vector<double> x(m, 0.0);   // most-recent-first tap line
    std::vector<double> Px(m), k(m);

    Signal out;
    out.sample_rate = segment.sample_rate;
    out.samples.resize(n);

    // the corrupted segment drives the taps and the clean reference is the
    // desired signal: the residual keeps the reference's heartbeat content
    // while everything artifact-specific is cancelled
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t i = m - 1; i > 0; --i) x[i] = x[i - 1];
        x[0] = segment.samples[t];

        double y = 0.0;
        for (std::size_t i = 0; i < m; ++i) y += wgt[i] * x[i];
        const double e = reference.samples[t] - y;
        out.samples[t] = e;

        for (std::size_t i = 0; i < m; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += P[i * m + j] * x[j];
            Px[i] = acc;
        }
        double xPx = 0.0;
        for (std::size_t i = 0; i < m; ++i) xPx += x[i] * Px[i];
        const double denom = forgetting + xPx;
        for (std::size_t i = 0; i < m; ++i) k[i] = Px[i] / denom;

        for (std::size_t i = 0; i < m; ++i) wgt[i] += k[i] * e;
        const double inv_lambda = 1.0 / forgetting;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                P[i * m + j] = inv_lambda * (P[i * m + j] - k[i] * Px[j]);
        // enforce symmetry so P stays positive-definite over long segments
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                const double s = 0.5 * (P[i * m + j] + P[j * m + i]);
                P[i * m + j] = P[j * m + i] = s;
            }
    }
    return out;
}

RrCandidateList sample_rr_candidates(const IbiSeries& hrv, double w) {
    if (hrv.resampled.samples.empty())
        throw parameter_error("sample_rr_candidates: missing resampled HRV");

    const Signal seeded = bandpass(hrv.resampled, kSeedBandLow, kSeedBandHigh);
    const double rr_c =
        dominant_frequency(seeded, kRrMinBpm / 60.0, kRrMaxBpm / 60.0) * 60.0;

    RrCandidateList out;
    out.center = rr_c;
    out.width = w;
    const double lo = std::max(kRrMinBpm, rr_c - w / 2.0);
    const double hi = std::min(kRrMaxBpm, rr_c + w / 2.0);
    // snap to the global 0.5 BPM grid
    double c = std::ceil(lo * 2.0) / 2.0;
    for (; c <= hi + 1e-9; c += 0.5) out.candidates.push_back(c);
    return out;
}

std::vector<double> f_difference_list(const IbiSeries& hrv, const RrCandidateList& cands) {
    std::vector<double> diffs;
    diffs.reserve(cands.candidates.size());
    for (double c : cands.candidates) {
        const Signal breath = candidate_band_filter(hrv, c);
        const double est =
            dominant_frequency(breath, kRrMinBpm / 60.0, kRrMaxBpm / 60.0) * 60.0;
        diffs.push_back(std::abs(est - c));
    }
    return minmax_normalize(diffs);
}

std::vector<double> t_difference_list(const IbiSeries& hrv, const RrCandidateList& cands) {
    std::vector<double> diffs;
    diffs.reserve(cands.candidates.size());
    for (double c : cands.candidates) {
        Signal breath = candidate_band_filter(hrv, c);
        breath.samples = remove_mean(std::move(breath.samples));
        const double est = zero_crossing_rr(breath);
        diffs.push_back(std::abs(est - c));
    }
    return minmax_normalize(diffs);
}

double calibrate_and_select(const DifferenceLists& lists, const RrCandidateList& cands) {
    const auto& f = lists.f_diff;
    const auto& grid = cands.candidates;
    if (f.size() != grid.size() || lists.t_diff.size() != grid.size())
        throw parameter_error("calibrate_and_select: list/candidate mismatch");

    std::vector<std::size_t> minima = local_minima(f);
    if (minima.empty()) {
        // degenerate list: fall back to the global argmin
        std::size_t best = 0;
        for (std::size_t i = 1; i < f.size(); ++i)
            if (f[i] < f[best]) best = i;
        return grid[best];
    }

    std::sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) {
        if (f[a] != f[b]) return f[a] < f[b];
        return a < b;  // equal depth: prefer the lower RR
    });
    if (minima.size() > 3) minima.resize(3);

    const std::size_t smooth_win = std::min<std::size_t>(5, lists.t_diff.size());
    const std::vector<double> t_smooth = moving_average(lists.t_diff, smooth_win);

    std::size_t best = minima.front();
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t i : minima) {
        const double score = f[i] + t_smooth[i];
        if (score < best_score || (score == best_score && grid[i] < grid[best])) {
            best_score = score;
            best = i;
        }
    }
    return grid[best];
}

RrEstimate estimate_rr_rsa(const std::optional<AudioWindow>& left,
                           const std::optional<AudioWindow>& right,
                           const RsaConfig& cfg, RsaTrace* trace) {
    RrEstimate est;
    est.pipeline = PipelineKind::Rsa;
    est.activity = ActivityClass::Sedentary;

    auto process_channel = [&](const AudioWindow& w) -> std::optional<IbiSeries> {
        try {
            AudioWindow work = w;
            if (cfg.interference_filtering) {
                const InterferenceMap map =
                    detect_interference(w, cfg.interference_factor);
                const std::size_t seg_samples = static_cast<std::size_t>(
                    std::lround(map.segment_length * w.signal.sample_rate));
                for (std::size_t i = 0; i < map.flagged.size(); ++i) {
                    if (!map.flagged[i]) continue;
                    // nearest clean segment as the reference
                    std::size_t ref = map.flagged.size();
                    for (std::size_t d = 1; d < map.flagged.size(); ++d) {
                        if (i >= d && !map.flagged[i - d]) { ref = i - d; break; }
                        if (i + d < map.flagged.size() && !map.flagged[i + d]) { ref = i + d; break; }
                    }
                    if (ref == map.flagged.size()) continue;  // nothing clean to use
                    Signal seg, refseg;
                    seg.sample_rate = refseg.sample_rate = w.signal.sample_rate;
                    seg.samples.assign(
                        w.signal.samples.begin() + static_cast<long>(i * seg_samples),
                        w.signal.samples.begin() + static_cast<long>((i + 1) * seg_samples));
                    refseg.samples.assign(
                        w.signal.samples.begin() + static_cast<long>(ref * seg_samples),
                        w.signal.samples.begin() + static_cast<long>((ref + 1) * seg_samples));
                    // shift the reference so the paste is its own periodic
                    // extension into the flagged span: that keeps the beat
                    // phase continuous at the near splice without consulting
                    // the artifact-swamped segment at all
                    {
                        const std::size_t n = refseg.samples.size();
                        // the reference's beat period, from the
                        // autocorrelation of its heartbeat-band envelope
                        Signal ref_hb =
                            hilbert_envelope(bandpass(refseg, 10.0, 30.0), 0.02);
                        ref_hb.samples = remove_mean(std::move(ref_hb.samples));
                        const std::size_t nfft = next_pow2(n);
                        std::vector<std::complex<double>> ac(nfft);
                        for (std::size_t t = 0; t < n; ++t) ac[t] = ref_hb.samples[t];
                        fft_inplace(ac, false);
                        for (std::size_t t = 0; t < nfft; ++t)
                            ac[t] *= std::conj(ac[t]);
                        fft_inplace(ac, true);
                        const double fs_seg = refseg.sample_rate;
                        const std::size_t lag_lo =
                            static_cast<std::size_t>(std::lround(kIbiMin * fs_seg));
                        const std::size_t lag_hi = std::min(
                            n - 1, static_cast<std::size_t>(std::lround(kIbiMax * fs_seg)));
                        std::size_t period = lag_lo;
                        for (std::size_t s = lag_lo; s <= lag_hi; ++s)
                            if (ac[s].real() > ac[period].real()) period = s;
                        double period_s = static_cast<double>(period) / fs_seg;
                        // the reference's own beats give a sharper period
                        // (mean IBI) and anchor the phase at the beat nearest
                        // the splice, so the extension drifts less over the gap
                        double beat_first = 0.0, beat_last = 0.0;
                        bool have_beats = false;
                        try {
                            const PeakSet pk = adaptive_peak_detect(
                                bandpass(refseg, 10.0, 30.0), cfg.heartbeat_ma_window,
                                cfg.heartbeat_min_separation);
                            if (pk.size() >= 2) {
                                beat_first = pk.times.front();
                                beat_last = pk.times.back();
                                period_s = (beat_last - beat_first) /
                                           static_cast<double>(pk.size() - 1);
                                have_beats = true;
                            }
                        } catch (const std::exception&) {
                        }
                        // advancing the reference by its distance to the
                        // flagged segment (mod beat period) continues its own
                        // rhythm across the splice; the wrapped tail is filled
                        // from one period earlier, so there is no wrap glitch
                        const double dist_s =
                            static_cast<double>((ref > i ? ref - i : i - ref) *
                                                seg_samples) /
                            fs_seg;
                        double shift_s;
                        if (ref < i && have_beats)
                            shift_s = std::fmod(beat_first - beat_last + dist_s, period_s);
                        else if (ref < i)
                            shift_s = std::fmod(dist_s, period_s);
                        else
                            shift_s = period_s - std::fmod(dist_s, period_s);
                        shift_s = std::fmod(shift_s + 2.0 * period_s, period_s);
                        period = std::max<std::size_t>(
                            lag_lo, static_cast<std::size_t>(std::lround(period_s * fs_seg)));
                        std::size_t best_s = std::min<std::size_t>(
                            period - 1,
                            static_cast<std::size_t>(std::lround(shift_s * fs_seg)));
                        // refine within a quarter period by correlating the
                        // heartbeat-band envelopes of the two segments: a
                        // single mean period cannot represent the local
                        // respiratory IBI modulation, while the narrow search
                        // window keeps the artifact-noised correlation from
                        // jumping to the anti-phase lock
                        {
                            Signal seg_hb =
                                hilbert_envelope(bandpass(seg, 10.0, 30.0), 0.02);
                            seg_hb.samples = remove_mean(std::move(seg_hb.samples));
                            std::vector<std::complex<double>> xa(nfft), xb(nfft);
                            for (std::size_t t = 0; t < n; ++t) {
                                xa[t] = seg_hb.samples[t];
                                xb[t] = ref_hb.samples[t];
                            }
                            fft_inplace(xa, false);
                            fft_inplace(xb, false);
                            for (std::size_t t = 0; t < nfft; ++t)
                                xa[t] = std::conj(xa[t]) * xb[t];
                            fft_inplace(xa, true);
                            const long half_win = static_cast<long>(period) / 4;
                            long arg = -1;
                            double best_score = 0.0;
                            for (long d = -half_win; d <= half_win; ++d) {
                                long cand = static_cast<long>(best_s) + d;
                                if (cand < 0) cand += static_cast<long>(period);
                                if (cand < 0 || cand >= static_cast<long>(n)) continue;
                                const double score = xa[cand].real();
                                if (arg < 0 || score > best_score) {
                                    best_score = score;
                                    arg = cand;
                                }
                            }
                            if (arg >= 0) best_s = static_cast<std::size_t>(arg);
                        }
                        if (best_s != 0) {
                            std::vector<double> shifted(n);
                            for (std::size_t t = 0; t < n; ++t) {
                                std::size_t idx = t + best_s;
                                while (idx >= n) idx -= period;
                                shifted[t] = refseg.samples[idx];
                            }
                            refseg.samples = std::move(shifted);
                        }
                    }
                    Signal cleaned = rls_filter(seg, refseg, cfg.rls_order,
                                                cfg.rls_forgetting, cfg.rls_delta);
                    std::copy(cleaned.samples.begin(), cleaned.samples.end(),
                              work.signal.samples.begin() + static_cast<long>(i * seg_samples));
                }
            }
            const PeakSet peaks = detect_heartbeats(work, cfg);
            return compute_hrv(peaks, cfg.resample_rate);
        } catch (const low_quality_error&) {
            return std::nullopt;
        }
    };

    std::optional<IbiSeries> hrv_l, hrv_r;
    if (left) hrv_l = process_channel(*left);
    if (right) hrv_r = process_channel(*right);

    if (!hrv_l && !hrv_r) {
        est.valid = false;
        return est;
    }

    const IbiSeries& hrv = select_channel(hrv_l, hrv_r);
    const RrCandidateList cands = sample_rr_candidates(hrv, cfg.candidate_width);
    DifferenceLists lists;
    lists.f_diff = f_difference_list(hrv, cands);
    lists.t_diff = t_difference_list(hrv, cands);
    est.rr_bpm = calibrate_and_select(lists, cands);
    est.valid = true;

    if (trace) {
        trace->selected_hrv = hrv;
        trace->candidates = cands;
        trace->lists = lists;
    }
    return est;
}

}  // namespace rrsense
