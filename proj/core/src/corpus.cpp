#include "rrsense/corpus.hpp"

#include <random>

#include "rrsense/synth.hpp"

namespace rrsense {

std::vector<std::pair<AudioWindow, ActivityClass>> make_segment_corpus(
    const CorpusConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uhr(55.0, 95.0);
    std::uniform_real_distribution<double> urr(10.0, 25.0);
    std::uniform_real_distribution<double> uwalk(1.4, 2.2);
    std::uniform_real_distribution<double> urun(2.4, 3.2);
    std::uniform_real_distribution<double> usnr(15.0, 30.0);
    std::uniform_int_distribution<int> ulrc(2, 4);

    std::vector<std::pair<AudioWindow, ActivityClass>> out;
    out.reserve(3 * cfg.per_class);

    for (std::size_t i = 0; i < cfg.per_class; ++i) {
        SedentaryScenario sc;
        sc.mean_hr = uhr(rng);
        sc.rr = urr(rng);
        sc.rsa_depth = 0.03;
        sc.noise_snr = usnr(rng);
        sc.duration = cfg.segment_s;
        sc.sample_rate = cfg.sample_rate;
        sc.seed = rng();
        out.emplace_back(synth_sedentary(sc).left, ActivityClass::Sedentary);
    }
    for (std::size_t i = 0; i < cfg.per_class; ++i) {
        ActiveScenario sc;
        sc.stride = uwalk(rng);
        sc.lrc_schedule = {{0.0, ulrc(rng)}};
        sc.breath_band_low = 300.0;
        sc.breath_band_high = 1800.0;
        sc.noise_snr = usnr(rng);
        sc.duration = cfg.segment_s;
        sc.sample_rate = cfg.sample_rate;
        sc.seed = rng();
        out.emplace_back(synth_active(sc).left, ActivityClass::ActiveLow);
    }
    for (std::size_t i = 0; i < cfg.per_class; ++i) {
        ActiveScenario sc;
        sc.stride = urun(rng);
        sc.lrc_schedule = {{0.0, ulrc(rng)}};
        sc.breath_band_low = 2000.0;
        sc.breath_band_high = 9000.0;
        sc.breath_gain = 10.0;
        sc.footstep.frequency = 14.0;
        sc.footstep.amplitude = 20.0;
        sc.footstep.decay = 0.025;
        sc.noise_snr = usnr(rng);
        sc.duration = cfg.segment_s;
        sc.sample_rate = cfg.sample_rate;
        sc.seed = rng();
        out.emplace_back(synth_active(sc).left, ActivityClass::ActiveHigh);
    }
    return out;
}

AudioWindow make_breath_reference(double band_low, double band_high,
                                  double sample_rate, double duration,
                                  std::uint64_t seed) {
    ActiveScenario sc;
    sc.stride = 1.0;
    sc.lrc_schedule = {{0.0, 2}};
    sc.breath_band_low = band_low;
    sc.breath_band_high = band_high;
    sc.breath_gain = 1.0;
    sc.footstep.amplitude = 0.0;  // breaths only
    sc.duration = duration;
    sc.sample_rate = sample_rate;
    sc.seed = seed;
    return synth_active(sc).left;
}

BreathingTemplate make_default_template(double band_low, double band_high) {
    const AudioWindow ref = make_breath_reference(band_low, band_high);
    return build_breathing_template(ref, band_low, band_high);
}

}  // namespace rrsense
