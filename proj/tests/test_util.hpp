#ifndef RRSENSE_TEST_UTIL_HPP
#define RRSENSE_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rrsense/types.hpp"

namespace testutil {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline rrsense::Signal sine(double freq, double amplitude, double duration,
                            double fs, double phase = 0.0) {
    rrsense::Signal s;
    s.sample_rate = fs;
    const std::size_t n = static_cast<std::size_t>(std::lround(duration * fs));
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        s.samples[i] =
            amplitude * std::sin(2.0 * kPi * freq * static_cast<double>(i) / fs + phase);
    return s;
}

inline rrsense::Signal constant(double value, double duration, double fs) {
    rrsense::Signal s;
    s.sample_rate = fs;
    s.samples.assign(static_cast<std::size_t>(std::lround(duration * fs)), value);
    return s;
}

inline rrsense::Signal add(const rrsense::Signal& a, const rrsense::Signal& b) {
    rrsense::Signal s = a;
    for (std::size_t i = 0; i < s.samples.size() && i < b.samples.size(); ++i)
        s.samples[i] += b.samples[i];
    return s;
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma) * (a[i] - ma);
        db += (b[i] - mb) * (b[i] - mb);
    }
    if (da == 0.0 || db == 0.0) return 0.0;
    return num / std::sqrt(da * db);
}

inline double rms(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return v.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(v.size()));
}

inline std::vector<double> random_series(std::size_t n, std::mt19937_64& rng,
                                         double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

}  // namespace testutil

#endif
