#include "rrsense/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace rrsense {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& s, std::uint32_t v) {
    s.push_back(static_cast<char>(v & 0xff));
    s.push_back(static_cast<char>((v >> 8) & 0xff));
    s.push_back(static_cast<char>((v >> 16) & 0xff));
    s.push_back(static_cast<char>((v >> 24) & 0xff));
}
void put_u16(std::string& s, std::uint16_t v) {
    s.push_back(static_cast<char>(v & 0xff));
    s.push_back(static_cast<char>((v >> 8) & 0xff));
}

[[noreturn]] void fail_at(const std::string& what, std::size_t offset) {
    throw wav_error(what + " (byte offset " + std::to_string(offset) + ")");
}

}  // namespace

std::vector<Signal> read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw wav_error("cannot open " + path);
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
        std::memcmp(data.data() + 8, "WAVE", 4) != 0)
        fail_at("not a RIFF/WAVE file", 0);

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    const unsigned char* pcm = nullptr;
    std::size_t pcm_bytes = 0;
    std::size_t pcm_offset = 0;
    bool have_fmt = false;

    std::size_t pos = 12;
    while (pos + 8 <= data.size()) {
        const std::uint32_t chunk_size = read_u32(data.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (std::memcmp(data.data() + pos, "fmt ", 4) == 0) {
            if (chunk_size < 16 || body + 16 > data.size())
                fail_at("truncated fmt chunk", pos);
            format = read_u16(data.data() + body);
            channels = read_u16(data.data() + body + 2);
            sample_rate = read_u32(data.data() + body + 4);
            bits = read_u16(data.data() + body + 14);
            have_fmt = true;
        } else if (std::memcmp(data.data() + pos, "data", 4) == 0) {
            if (body + chunk_size > data.size())
                fail_at("data chunk claims " + std::to_string(chunk_size) +
                            " bytes but only " + std::to_string(data.size() - body) +
                            " remain",
                        pos);
            pcm = data.data() + body;
            pcm_bytes = chunk_size;
            pcm_offset = body;
        }
        pos = body + chunk_size + (chunk_size & 1);
    }

    if (!have_fmt) fail_at("missing fmt chunk", data.size());
    if (!pcm) fail_at("missing data chunk", data.size());
    if (channels < 1 || channels > 2)
        fail_at("unsupported channel count " + std::to_string(channels), pcm_offset);

    const bool is_float = format == 3;
    if (!(format == 1 && (bits == 16 || bits == 32)) && !(is_float && bits == 32))
        fail_at("unsupported encoding (format " + std::to_string(format) + ", " +
                    std::to_string(bits) + " bits)",
                pcm_offset);

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    if (pcm_bytes % frame_bytes != 0)
        fail_at("data length not a whole number of frames", pcm_offset);
    const std::size_t frames = pcm_bytes / frame_bytes;

    std::vector<Signal> out(channels);
    for (auto& s : out) {
        s.sample_rate = sample_rate;
        s.samples.resize(frames);
    }
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t c = 0; c < channels; ++c) {
            const unsigned char* p = pcm + (f * channels + c) * bytes_per_sample;
            double v;
            if (is_float) {
                float fv;
                std::memcpy(&fv, p, 4);
                v = fv;
            } else if (bits == 16) {
                const std::int16_t iv =
                    static_cast<std::int16_t>(p[0] | (p[1] << 8));
                v = static_cast<double>(iv) / 32768.0;
            } else {
                const std::int32_t iv = static_cast<std::int32_t>(read_u32(p));
                v = static_cast<double>(iv) / 2147483648.0;
            }
            out[c].samples[f] = v;
        }
    }
    return out;
}

void write_wav(const std::string& path, const std::vector<Signal>& channels,
               WavEncoding enc) {
    if (channels.empty() || channels.size() > 2)
        throw wav_error("write_wav: need 1 or 2 channels");
    const std::size_t frames = channels.front().size();
    for (const auto& c : channels)
        if (c.size() != frames || c.sample_rate != channels.front().sample_rate)
            throw wav_error("write_wav: channel shape mismatch");

    const std::uint16_t n_ch = static_cast<std::uint16_t>(channels.size());
    const std::uint16_t bits = enc == WavEncoding::Pcm16 ? 16 : 32;
    const std::uint16_t fmt = enc == WavEncoding::Pcm16 ? 1 : 3;
    const std::uint32_t rate = static_cast<std::uint32_t>(channels.front().sample_rate);
    const std::uint32_t data_bytes =
        static_cast<std::uint32_t>(frames * n_ch * (bits / 8));

    std::string buf;
    buf.reserve(44 + data_bytes);
    buf += "RIFF";
    put_u32(buf, 36 + data_bytes);
    buf += "WAVEfmt ";
    put_u32(buf, 16);
    put_u16(buf, fmt);
    put_u16(buf, n_ch);
    put_u32(buf, rate);
    put_u32(buf, rate * n_ch * (bits / 8));
    put_u16(buf, static_cast<std::uint16_t>(n_ch * (bits / 8)));
    put_u16(buf, bits);
    buf += "data";
    put_u32(buf, data_bytes);

    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t c = 0; c < n_ch; ++c) {
            const double v = channels[c].samples[f];
            if (enc == WavEncoding::Pcm16) {
                const long raw = std::lround(std::clamp(v, -1.0, 1.0) * 32768.0);
                const auto iv =
                    static_cast<std::int16_t>(std::clamp(raw, -32768L, 32767L));
                put_u16(buf, static_cast<std::uint16_t>(iv));
            } else {
                const float fv = static_cast<float>(v);
                std::uint32_t bitsv;
                std::memcpy(&bitsv, &fv, 4);
                put_u32(buf, bitsv);
            }
        }
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw wav_error("write_wav: cannot open " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace rrsense
