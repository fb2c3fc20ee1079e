#ifndef RRSENSE_RSA_HPP
#define RRSENSE_RSA_HPP

#include <optional>
#include <vector>

#include "rrsense/dsp.hpp"
#include "rrsense/types.hpp"

namespace rrsense {

struct IbiSeries {
    std::vector<double> beat_times;  // seconds, strictly increasing
    std::vector<double> intervals;   // successive differences, seconds
    Signal resampled;                // uniform series for spectral use
};

struct RrCandidateList {
    std::vector<double> candidates;  // BPM, ascending, 0.5 BPM steps
    double center = 0.0;             // BPM
    double width = 0.0;              // BPM
};

struct DifferenceLists {
    std::vector<double> f_diff;  // normalized, aligned with candidates
    std::vector<double> t_diff;
};

struct InterferenceMap {
    double segment_length = 3.0;  // seconds
    std::vector<bool> flagged;
    std::vector<double> std_per_segment;
};

struct RsaConfig {
    double candidate_width = 20.0;        // w, BPM
    double resample_rate = 4.0;           // Hz
    double interference_factor = 3.0;     // x median segment STD
    bool interference_filtering = true;
    double heartbeat_ma_window = 2.0;     // adaptive-threshold MA, seconds
    double heartbeat_min_separation = 0.25;
    int rls_order = 8;
    double rls_forgetting = 0.995;
    double rls_delta = 100.0;             // initial inverse-correlation scale
    bool detrend_candidates = false;      // mean removal only by default
};

// Human RR plausibility bounds, BPM.
inline constexpr double kRrMinBpm = 7.5;
inline constexpr double kRrMaxBpm = 42.5;
// Interval plausibility bounds, seconds (30-240 BPM heart rate).
inline constexpr double kIbiMin = 0.25;
inline constexpr double kIbiMax = 2.0;

PeakSet detect_heartbeats(const AudioWindow& w, const RsaConfig& cfg = {});
IbiSeries compute_hrv(const PeakSet& peaks, double resample_rate = 4.0);
const IbiSeries& select_channel(const std::optional<IbiSeries>& left,
                                const std::optional<IbiSeries>& right);
InterferenceMap detect_interference(const AudioWindow& w, double threshold_factor,
                                    double segment_length = 3.0);
Signal rls_filter(const Signal& segment, const Signal& reference,
                  int order = 8, double forgetting = 0.995, double delta = 100.0);
RrCandidateList sample_rr_candidates(const IbiSeries& hrv, double w);
std::vector<double> f_difference_list(const IbiSeries& hrv, const RrCandidateList& cands);
std::vector<double> t_difference_list(const IbiSeries& hrv, const RrCandidateList& cands);
double calibrate_and_select(const DifferenceLists& lists, const RrCandidateList& cands);

struct RsaTrace {
    std::optional<IbiSeries> selected_hrv;
    RrCandidateList candidates;
    DifferenceLists lists;
};

RrEstimate estimate_rr_rsa(const std::optional<AudioWindow>& left,
                           const std::optional<AudioWindow>& right,
                           const RsaConfig& cfg = {}, RsaTrace* trace = nullptr);

}  // namespace rrsense

#endif
