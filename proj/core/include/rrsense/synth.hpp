#ifndef RRSENSE_SYNTH_HPP
#define RRSENSE_SYNTH_HPP

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "rrsense/types.hpp"

namespace rrsense {

inline constexpr double kSnrClean = std::numeric_limits<double>::infinity();

struct ArtifactBurst {
    double start = 0.0;     // seconds
    double duration = 0.0;  // seconds
    double gain = 1.0;      // relative to the pulse amplitude
};

struct PulseShape {
    double frequency = 15.0;  // Hz
    double length = 0.120;    // seconds
    double decay = 0.030;     // exponential time constant, seconds
    double amplitude = 1.0;
};

struct SedentaryScenario {
    double mean_hr = 70.0;    // BPM
    double rr = 15.0;         // BPM
    double rsa_depth = 0.04;  // seconds, peak IBI deviation
    PulseShape heartbeat{15.0, 0.120, 0.030, 1.0};
    std::vector<ArtifactBurst> artifacts;
    double noise_snr = kSnrClean;  // dB
    double duration = 60.0;
    double sample_rate = 4000.0;
    std::uint64_t seed = 1;
};

struct LrcPhase {
    double start = 0.0;  // seconds
    int steps_per_breath = 3;
};

struct ActiveScenario {
    double stride = 2.0;  // steps/s
    std::vector<LrcPhase> lrc_schedule{{0.0, 3}};
    double breath_band_low = 300.0;
    double breath_band_high = 1800.0;
    double breath_gain = 3.0;  // burst amplitude
    double breath_length = 0.300;
    PulseShape footstep{10.0, 0.150, 0.040, 10.0};
    double noise_snr = kSnrClean;
    double duration = 60.0;
    double sample_rate = 22050.0;
    std::uint64_t seed = 1;
};

struct SedentaryTruth {
    std::vector<double> beat_times;
    std::vector<double> intervals;  // successive differences
    double rr = 0.0;                // BPM, as configured
};

struct ActiveTruth {
    std::vector<double> step_times;
    std::vector<double> breath_times;
    double stride = 0.0;  // steps/s
    double rr = 0.0;      // BPM, breath events scaled to per-minute
};

struct SedentaryAudio {
    AudioWindow left;
    AudioWindow right;
    SedentaryTruth truth;
};

struct ActiveAudio {
    AudioWindow left;
    AudioWindow right;
    ActiveTruth truth;
};

SedentaryAudio synth_sedentary(const SedentaryScenario& sc);
ActiveAudio synth_active(const ActiveScenario& sc);

// Additive white noise at the requested SNR (dB); kSnrClean passes the
// signal through untouched.
AudioWindow add_noise(const AudioWindow& w, double snr_db, std::uint64_t seed);

}  // namespace rrsense

#endif
