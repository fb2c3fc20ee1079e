#ifndef RRSENSE_CORPUS_HPP
#define RRSENSE_CORPUS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "rrsense/lrc.hpp"
#include "rrsense/types.hpp"

namespace rrsense {

struct CorpusConfig {
    std::size_t per_class = 100;
    double sample_rate = 22050.0;
    double segment_s = 5.0;
    std::uint64_t seed = 11;
};

// Labeled 5 s segments (heartbeat / walking / running) for selector
// training and evaluation.
std::vector<std::pair<AudioWindow, ActivityClass>> make_segment_corpus(
    const CorpusConfig& cfg = {});

// Reference recording of synthetic breath bursts in the given band; the
// source for the bundled breathing template.
AudioWindow make_breath_reference(double band_low, double band_high,
                                  double sample_rate = 22050.0,
                                  double duration = 10.0, std::uint64_t seed = 3);

BreathingTemplate make_default_template(double band_low = 300.0,
                                        double band_high = 1800.0);

}  // namespace rrsense

#endif
