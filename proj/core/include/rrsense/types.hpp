#ifndef RRSENSE_TYPES_HPP
#define RRSENSE_TYPES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrsense {

struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Signal too degraded to produce a trustworthy estimate; the window is
// marked invalid rather than reporting a fabricated value.
struct low_quality_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Signal {
    std::vector<double> samples;
    double sample_rate = 0.0;

    std::size_t size() const { return samples.size(); }
    double duration() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

struct PeakSet {
    std::vector<std::size_t> indices;
    std::vector<double> times;  // seconds, = index / sample_rate

    std::size_t size() const { return indices.size(); }
};

enum class Channel { Left, Right, Mono };

struct AudioWindow {
    Signal signal;
    Channel channel = Channel::Mono;
};

enum class ActivityClass { Sedentary, ActiveLow, ActiveHigh, Undetermined };

enum class PipelineKind { Rsa, Lrc };

std::string to_string(ActivityClass c);
std::string to_string(PipelineKind p);
bool activity_from_string(const std::string& s, ActivityClass& out);

struct RrEstimate {
    double window_start = 0.0;
    double window_end = 0.0;
    PipelineKind pipeline = PipelineKind::Rsa;
    ActivityClass activity = ActivityClass::Undetermined;
    double rr_bpm = 0.0;
    bool valid = false;
    // Per-channel RR where both channels produced one (LRC fusion detail).
    std::vector<double> channel_rr;
};

}  // namespace rrsense

#endif
