#include "rrsense/selector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "rrsense/dsp.hpp"

namespace rrsense {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr std::size_t kMelFilters = 26;
constexpr double kFrameLen = 0.025;
constexpr double kFrameHop = 0.010;
constexpr double kLogFloor = 1e-12;

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

std::vector<double> mel_frame_coeffs(const Signal& frame) {
    const double fs = frame.sample_rate;
    const std::size_t n = frame.samples.size();

    Signal windowed;
    windowed.sample_rate = fs;
    windowed.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                                static_cast<double>(n - 1));
        windowed.samples[i] = frame.samples[i] * w;
    }

    const PowerSpectrum spec = periodogram(windowed);

    // triangular mel filterbank over [0, fs/2]
    const double mel_max = hz_to_mel(fs / 2.0);
    std::vector<double> centers(kMelFilters + 2);
    for (std::size_t i = 0; i < centers.size(); ++i)
        centers[i] = mel_to_hz(mel_max * static_cast<double>(i) /
                               static_cast<double>(kMelFilters + 1));

    std::vector<double> energies(kMelFilters, 0.0);
    for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
        const double f = spec.freqs[k];
        for (std::size_t m = 0; m < kMelFilters; ++m) {
            const double lo = centers[m], mid = centers[m + 1], hi = centers[m + 2];
            if (f <= lo || f >= hi) continue;
            const double w = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
            energies[m] += w * spec.power[k];
        }
    }

    std::vector<double> logs(kMelFilters);
    for (std::size_t m = 0; m < kMelFilters; ++m)
        logs[m] = std::log(std::max(energies[m], kLogFloor));

    // DCT-II, first kMfccCoeffs coefficients
    std::vector<double> mfcc(kMfccCoeffs, 0.0);
    for (std::size_t c = 0; c < kMfccCoeffs; ++c) {
        double acc = 0.0;
        for (std::size_t m = 0; m < kMelFilters; ++m)
            acc += logs[m] * std::cos(kPi * static_cast<double>(c) *
                                      (static_cast<double>(m) + 0.5) /
                                      static_cast<double>(kMelFilters));
        mfcc[c] = acc;
    }
    return mfcc;
}

std::vector<double> standardize(const std::vector<double>& x, const SelectorModel& m) {
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        z[i] = (x[i] - m.feat_mean[i]) / m.feat_std[i];
    return z;
}

// Pegasos-style hinge-loss SGD; deterministic under a fixed seed.
LinearStage train_stage(const std::vector<std::vector<double>>& xs,
                        const std::vector<int>& ys, const SvmTrainConfig& cfg,
                        std::uint64_t seed_offset) {
    // bias folded in as a constant feature so it shares the regularized,
    // decaying-step update; a separately updated bias blows up on the huge
    // first Pegasos step (eta = 1/lambda)
    const std::size_t dim = xs.front().size() + 1;
    std::vector<double> w(dim, 0.0);

    std::mt19937_64 rng(cfg.seed + seed_offset);
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    // average the iterates over the second half of training; the final
    // Pegasos iterate alone is noisy
    std::vector<double> avg_w(dim, 0.0);
    std::size_t averaged = 0;
    const std::size_t burn_in = cfg.epochs / 2;

    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i : order) {
            ++t;
            const double eta = 1.0 / (cfg.lambda * static_cast<double>(t));
            double score = w[dim - 1];
            for (std::size_t d = 0; d + 1 < dim; ++d) score += w[d] * xs[i][d];
            const double margin = ys[i] * score;
            for (double& v : w) v *= (1.0 - eta * cfg.lambda);
            if (margin < 1.0) {
                for (std::size_t d = 0; d + 1 < dim; ++d)
                    w[d] += eta * ys[i] * xs[i][d];
                w[dim - 1] += eta * ys[i];
            }
            if (epoch >= burn_in) {
                for (std::size_t d = 0; d < dim; ++d) avg_w[d] += w[d];
                ++averaged;
            }
        }
    }
    if (averaged > 0)
        for (std::size_t d = 0; d < dim; ++d)
            w[d] = avg_w[d] / static_cast<double>(averaged);

    LinearStage stage;
    stage.weights.assign(w.begin(), w.end() - 1);
    stage.bias = w.back();
    return stage;
}

}  // namespace

double LinearStage::decision(const std::vector<double>& x) const {
    double acc = bias;
    for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * x[i];
    return acc;
}

SegmentFeatures mfcc_features(const AudioWindow& segment) {
    const Signal& s = segment.signal;
    const std::size_t frame_n =
        static_cast<std::size_t>(std::lround(kFrameLen * s.sample_rate));
    const std::size_t hop_n =
        static_cast<std::size_t>(std::lround(kFrameHop * s.sample_rate));
    if (frame_n < 2 || s.size() < frame_n)
        throw parameter_error("mfcc_features: segment shorter than one frame");

    std::vector<double> acc(kMfccCoeffs, 0.0);
    std::size_t frames = 0;
    for (std::size_t start = 0; start + frame_n <= s.size(); start += hop_n) {
        Signal frame;
        frame.sample_rate = s.sample_rate;
        frame.samples.assign(s.samples.begin() + static_cast<long>(start),
                             s.samples.begin() + static_cast<long>(start + frame_n));
        const auto c = mel_frame_coeffs(frame);
        for (std::size_t i = 0; i < kMfccCoeffs; ++i) acc[i] += c[i];
        ++frames;
    }

    SegmentFeatures out;
    out.mfcc.resize(kMfccCoeffs);
    for (std::size_t i = 0; i < kMfccCoeffs; ++i)
        out.mfcc[i] = acc[i] / static_cast<double>(frames);
    return out;
}

SelectorModel train_selector(
    const std::vector<std::pair<SegmentFeatures, ActivityClass>>& labeled,
    const SvmTrainConfig& cfg) {
    if (labeled.empty()) throw parameter_error("train_selector: empty training set");
    const std::size_t dim = labeled.front().first.mfcc.size();

    SelectorModel m;
    m.dim = dim;
    m.feat_mean.assign(dim, 0.0);
    m.feat_std.assign(dim, 0.0);
    for (const auto& [f, cls] : labeled) {
        if (f.mfcc.size() != dim)
            throw parameter_error("train_selector: inconsistent feature dimension");
        for (std::size_t i = 0; i < dim; ++i) m.feat_mean[i] += f.mfcc[i];
    }
    for (double& v : m.feat_mean) v /= static_cast<double>(labeled.size());
    for (const auto& [f, cls] : labeled)
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = f.mfcc[i] - m.feat_mean[i];
            m.feat_std[i] += d * d;
        }
    for (double& v : m.feat_std) {
        v = std::sqrt(v / static_cast<double>(labeled.size()));
        if (v <= 0.0) v = 1.0;
    }

    // stage 1: sedentary (-1) vs active (+1)
    std::vector<std::vector<double>> x1, x2;
    std::vector<int> y1, y2;
    for (const auto& [f, cls] : labeled) {
        const auto z = standardize(f.mfcc, m);
        switch (cls) {
            case ActivityClass::Sedentary:
                x1.push_back(z);
                y1.push_back(-1);
                break;
            case ActivityClass::ActiveLow:
                x1.push_back(z);
                y1.push_back(+1);
                x2.push_back(z);
                y2.push_back(-1);
                break;
            case ActivityClass::ActiveHigh:
                x1.push_back(z);
                y1.push_back(+1);
                x2.push_back(z);
                y2.push_back(+1);
                break;
            default:
                throw parameter_error("train_selector: Undetermined label");
        }
    }

    auto has_both = [](const std::vector<int>& y) {
        return std::count(y.begin(), y.end(), -1) > 0 &&
               std::count(y.begin(), y.end(), +1) > 0;
    };
    if (!has_both(y1) || !has_both(y2))
        throw parameter_error("train_selector: each stage needs both classes");

    m.stage1 = train_stage(x1, y1, cfg, 0);
    m.stage2 = train_stage(x2, y2, cfg, 1);
    return m;
}

ActivityClass classify_segment(const SegmentFeatures& f, const SelectorModel& m) {
    if (f.mfcc.size() != m.dim)
        throw parameter_error("classify_segment: feature dimension mismatch");
    const auto z = standardize(f.mfcc, m);
    if (m.stage1.decision(z) <= 0.0) return ActivityClass::Sedentary;
    return m.stage2.decision(z) <= 0.0 ? ActivityClass::ActiveLow
                                       : ActivityClass::ActiveHigh;
}

namespace {

VoteResult vote_over_segments(const Signal& mono, const SelectorModel& m) {
    constexpr double kSegmentLen = 5.0;
    const std::size_t seg_n =
        static_cast<std::size_t>(std::lround(kSegmentLen * mono.sample_rate));
    if (seg_n == 0 || mono.size() < seg_n)
        throw parameter_error("select_pipeline: window shorter than one segment");

    VoteResult vote;
    for (std::size_t start = 0; start + seg_n <= mono.size(); start += seg_n) {
        AudioWindow seg;
        seg.signal.sample_rate = mono.sample_rate;
        seg.signal.samples.assign(mono.samples.begin() + static_cast<long>(start),
                                  mono.samples.begin() + static_cast<long>(start + seg_n));
        vote.per_segment.push_back(classify_segment(mfcc_features(seg), m));
    }

    std::size_t counts[3] = {0, 0, 0};
    for (ActivityClass c : vote.per_segment) {
        if (c == ActivityClass::Sedentary) ++counts[0];
        else if (c == ActivityClass::ActiveLow) ++counts[1];
        else ++counts[2];
    }
    const std::size_t total = vote.per_segment.size();
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (counts[i] > counts[best]) best = i;
    vote.agreement = static_cast<double>(counts[best]) / static_cast<double>(total);

    // strictly more than 75% of segments must agree
    if (vote.agreement > 0.75) {
        vote.winner = best == 0   ? ActivityClass::Sedentary
                      : best == 1 ? ActivityClass::ActiveLow
                                  : ActivityClass::ActiveHigh;
    } else {
        vote.winner = ActivityClass::Undetermined;
    }
    return vote;
}

}  // namespace

VoteResult select_pipeline(const AudioWindow& left, const AudioWindow& right,
                           const SelectorModel& m) {
    if (left.signal.size() != right.signal.size() ||
        left.signal.sample_rate != right.signal.sample_rate)
        throw parameter_error("select_pipeline: channel shape mismatch");
    Signal mono;
    mono.sample_rate = left.signal.sample_rate;
    mono.samples.resize(left.signal.size());
    for (std::size_t i = 0; i < mono.samples.size(); ++i)
        mono.samples[i] = 0.5 * (left.signal.samples[i] + right.signal.samples[i]);
    return vote_over_segments(mono, m);
}

VoteResult select_pipeline(const AudioWindow& mono, const SelectorModel& m) {
    return vote_over_segments(mono.signal, m);
}

void save_model(const SelectorModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parameter_error("save_model: cannot open " + path);
    out << "rrsense-selector v1\n";
    out << "dim " << m.dim << "\n";
    char buf[64];
    auto emit = [&](const char* tag, const std::vector<double>& v, double extra,
                    bool with_extra) {
        out << tag;
        for (double x : v) {
            std::snprintf(buf, sizeof buf, " %.17g", x);
            out << buf;
        }
        if (with_extra) {
            std::snprintf(buf, sizeof buf, " %.17g", extra);
            out << buf;
        }
        out << "\n";
    };
    emit("mean", m.feat_mean, 0.0, false);
    emit("std", m.feat_std, 0.0, false);
    emit("stage1", m.stage1.weights, m.stage1.bias, true);
    emit("stage2", m.stage2.weights, m.stage2.bias, true);
}

SelectorModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parameter_error("load_model: cannot open " + path);
    std::string header, version, tag;
    in >> header >> version;
    if (header != "rrsense-selector" || version != "v1")
        throw parameter_error("load_model: unrecognized model file " + path);

    SelectorModel m;
    in >> tag >> m.dim;
    if (tag != "dim" || m.dim == 0)
        throw parameter_error("load_model: malformed dim line in " + path);

    auto read_vec = [&](const char* expect, std::vector<double>& v, std::size_t n) {
        in >> tag;
        if (tag != expect)
            throw parameter_error(std::string("load_model: expected ") + expect);
        v.resize(n);
        for (auto& x : v)
            if (!(in >> x)) throw parameter_error("load_model: truncated " + path);
    };
    read_vec("mean", m.feat_mean, m.dim);
    read_vec("std", m.feat_std, m.dim);
    std::vector<double> s1, s2;
    read_vec("stage1", s1, m.dim + 1);
    read_vec("stage2", s2, m.dim + 1);
    m.stage1.weights.assign(s1.begin(), s1.end() - 1);
    m.stage1.bias = s1.back();
    m.stage2.weights.assign(s2.begin(), s2.end() - 1);
    m.stage2.bias = s2.back();
    for (double sd : m.feat_std)
        if (!(sd > 0.0)) throw parameter_error("load_model: nonpositive feature STD");
    return m;
}

}  // namespace rrsense
