#include "rrsense/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rrsense/dsp.hpp"

namespace rrsense {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void add_pulse(std::vector<double>& buf, double fs, double at, const PulseShape& p) {
    const std::size_t start = static_cast<std::size_t>(std::lround(at * fs));
    const std::size_t len = static_cast<std::size_t>(std::lround(p.length * fs));
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t idx = start + i;
        if (idx >= buf.size()) break;
        const double t = static_cast<double>(i) / fs;
        buf[idx] += p.amplitude * std::exp(-t / p.decay) *
                    std::sin(2.0 * kPi * p.frequency * t);
    }
}

double signal_power(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

std::vector<double> white_noise(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

void mix_noise_at_snr(std::vector<double>& buf, double snr_db, std::mt19937_64& rng,
                      double p_sig) {
    if (std::isinf(snr_db)) return;
    if (p_sig <= 0.0) throw parameter_error("noise: zero-power input");
    auto noise = white_noise(buf.size(), rng);
    const double p_noise = signal_power(noise);
    const double target = p_sig / std::pow(10.0, snr_db / 10.0);
    const double scale = std::sqrt(target / p_noise);
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] += scale * noise[i];
}

void mix_noise_at_snr(std::vector<double>& buf, double snr_db, std::mt19937_64& rng) {
    mix_noise_at_snr(buf, snr_db, rng, signal_power(buf));
}

// 300 ms band-limited noise burst with raised-cosine onset/offset.
void add_breath_burst(std::vector<double>& buf, double fs, double at, double length,
                      double band_lo, double band_hi, double gain,
                      std::mt19937_64& rng) {
    const std::size_t len = static_cast<std::size_t>(std::lround(length * fs));
    if (len < 8) return;
    Signal noise;
    noise.sample_rate = fs;
    noise.samples = white_noise(len, rng);
    // Tilted spectrum: most energy in the lower third of the band, a weaker
    // layer across the whole band. Flat in-band noise would be spectrally
    // indistinguishable from filtered background noise.
    const double hi = std::min(band_hi, fs / 2.0 * 0.999);
    const double inner_hi = std::min(band_lo + (band_hi - band_lo) / 3.0, hi);
    Signal shaped = bandpass(noise, band_lo, inner_hi, 0.3);
    const Signal broad = bandpass(noise, band_lo, hi, 0.3);
    for (std::size_t i = 0; i < shaped.samples.size(); ++i)
        shaped.samples[i] += 0.25 * broad.samples[i];
    const double rms = std::sqrt(signal_power(shaped.samples));
    if (rms <= 0.0) return;

    const std::size_t ramp = len / 4;
    const std::size_t start = static_cast<std::size_t>(std::lround(at * fs));
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t idx = start + i;
        if (idx >= buf.size()) break;
        double env = 1.0;
        if (i < ramp)
            env = 0.5 * (1.0 - std::cos(kPi * static_cast<double>(i) / static_cast<double>(ramp)));
        else if (i >= len - ramp)
            env = 0.5 * (1.0 - std::cos(kPi * static_cast<double>(len - 1 - i) /
                                        static_cast<double>(ramp)));
        buf[idx] += gain * env * shaped.samples[i] / rms;
    }
}

}  // namespace

SedentaryAudio synth_sedentary(const SedentaryScenario& sc) {
    if (sc.rr < 7.5 || sc.rr > 42.5)
        throw parameter_error("synth_sedentary: rr outside [7.5, 42.5]");
    if (sc.mean_hr < 40.0 || sc.mean_hr > 180.0)
        throw parameter_error("synth_sedentary: mean_hr outside [40, 180]");
    if (!(sc.rsa_depth < 0.5 * (60.0 / sc.mean_hr)) || sc.rsa_depth < 0.0)
        throw parameter_error("synth_sedentary: rsa_depth too large");
    if (!(sc.duration > 0.0) || !(sc.sample_rate > 0.0))
        throw parameter_error("synth_sedentary: bad duration or sample rate");

    SedentaryAudio out;
    const double f_resp = sc.rr / 60.0;
    const double base_ibi = 60.0 / sc.mean_hr;

    double t = 0.1;
    while (t < sc.duration - 0.05) {
        out.truth.beat_times.push_back(t);
        t += base_ibi + sc.rsa_depth * std::sin(2.0 * kPi * f_resp * t);
    }
    for (std::size_t i = 1; i < out.truth.beat_times.size(); ++i)
        out.truth.intervals.push_back(out.truth.beat_times[i] - out.truth.beat_times[i - 1]);
    out.truth.rr = sc.rr;

    const std::size_t n = static_cast<std::size_t>(std::lround(sc.duration * sc.sample_rate));
    auto render = [&](std::uint64_t seed, Channel tag) {
        std::mt19937_64 rng(seed);
        std::vector<double> buf(n, 0.0);
        for (double bt : out.truth.beat_times)
            add_pulse(buf, sc.sample_rate, bt, sc.heartbeat);
        // SNR is relative to the physiological signal; injected artifacts
        // must not inflate the background noise floor
        const double p_sig = signal_power(buf);
        for (const auto& a : sc.artifacts) {
            auto noise = white_noise(
                static_cast<std::size_t>(std::lround(a.duration * sc.sample_rate)), rng);
            const std::size_t start =
                static_cast<std::size_t>(std::lround(a.start * sc.sample_rate));
            for (std::size_t i = 0; i < noise.size(); ++i) {
                const std::size_t idx = start + i;
                if (idx >= n) break;
                buf[idx] += a.gain * sc.heartbeat.amplitude * noise[i];
            }
        }
        mix_noise_at_snr(buf, sc.noise_snr, rng, p_sig);
        AudioWindow w;
        w.channel = tag;
        w.signal.sample_rate = sc.sample_rate;
        w.signal.samples = std::move(buf);
        return w;
    };
    out.left = render(sc.seed, Channel::Left);
    out.right = render(sc.seed + 1, Channel::Right);
    return out;
}

ActiveAudio synth_active(const ActiveScenario& sc) {
    if (sc.stride < 1.0 || sc.stride > 3.5)
        throw parameter_error("synth_active: stride outside [1.0, 3.5]");
    if (sc.lrc_schedule.empty())
        throw parameter_error("synth_active: empty LRC schedule");
    for (const auto& phase : sc.lrc_schedule)
        if (phase.steps_per_breath < 1.8 || phase.steps_per_breath > 5.6)
            throw parameter_error("synth_active: LRC outside [1.8, 5.6]");
    if (!(sc.duration > 0.0) || !(sc.sample_rate > 0.0))
        throw parameter_error("synth_active: bad duration or sample rate");

    ActiveAudio out;
    out.truth.stride = sc.stride;

    const double step_period = 1.0 / sc.stride;
    int steps_since_breath = 0;
    for (double t = 0.0; t < sc.duration - 1e-9; t += step_period) {
        out.truth.step_times.push_back(t);
        int k = sc.lrc_schedule.front().steps_per_breath;
        for (const auto& phase : sc.lrc_schedule)
            if (t >= phase.start) k = phase.steps_per_breath;
        ++steps_since_breath;
        if (steps_since_breath >= k) {
            out.truth.breath_times.push_back(t);
            steps_since_breath = 0;
        }
    }
    out.truth.rr =
        static_cast<double>(out.truth.breath_times.size()) * 60.0 / sc.duration;

    const std::size_t n = static_cast<std::size_t>(std::lround(sc.duration * sc.sample_rate));
    auto render = [&](std::uint64_t seed, Channel tag) {
        std::mt19937_64 rng(seed);
        std::vector<double> buf(n, 0.0);
        for (double st : out.truth.step_times)
            add_pulse(buf, sc.sample_rate, st, sc.footstep);
        for (double bt : out.truth.breath_times)
            add_breath_burst(buf, sc.sample_rate, bt, sc.breath_length,
                             sc.breath_band_low, sc.breath_band_high,
                             sc.breath_gain, rng);
        mix_noise_at_snr(buf, sc.noise_snr, rng);
        AudioWindow w;
        w.channel = tag;
        w.signal.sample_rate = sc.sample_rate;
        w.signal.samples = std::move(buf);
        return w;
    };
    out.left = render(sc.seed, Channel::Left);
    out.right = render(sc.seed + 1, Channel::Right);
    return out;
}

AudioWindow add_noise(const AudioWindow& w, double snr_db, std::uint64_t seed) {
    AudioWindow out = w;
    std::mt19937_64 rng(seed);
    mix_noise_at_snr(out.signal.samples, snr_db, rng);
    return out;
}

}  // namespace rrsense
