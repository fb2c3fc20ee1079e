#ifndef RRSENSE_WAV_HPP
#define RRSENSE_WAV_HPP

#include <string>
#include <vector>

#include "rrsense/types.hpp"

namespace rrsense {

struct wav_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// PCM 16/32-bit integer or 32-bit float, 1-2 channels; samples normalized
// to [-1, 1].
std::vector<Signal> read_wav(const std::string& path);

enum class WavEncoding { Pcm16, Float32 };

void write_wav(const std::string& path, const std::vector<Signal>& channels,
               WavEncoding enc = WavEncoding::Float32);

}  // namespace rrsense

#endif
