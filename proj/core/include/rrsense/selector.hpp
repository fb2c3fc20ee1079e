#ifndef RRSENSE_SELECTOR_HPP
#define RRSENSE_SELECTOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rrsense/types.hpp"

namespace rrsense {

inline constexpr std::size_t kMfccCoeffs = 13;

struct SegmentFeatures {
    std::vector<double> mfcc;  // kMfccCoeffs entries, averaged over frames
};

struct LinearStage {
    std::vector<double> weights;
    double bias = 0.0;

    double decision(const std::vector<double>& x) const;
};

struct SelectorModel {
    std::size_t dim = kMfccCoeffs;
    std::vector<double> feat_mean;
    std::vector<double> feat_std;
    LinearStage stage1;  // Sedentary (<0) vs Active (>0)
    LinearStage stage2;  // ActiveLow (<0) vs ActiveHigh (>0)
};

struct VoteResult {
    std::vector<ActivityClass> per_segment;
    ActivityClass winner = ActivityClass::Undetermined;
    double agreement = 0.0;
};

struct SvmTrainConfig {
    double lambda = 1e-3;
    std::size_t epochs = 200;
    std::uint64_t seed = 7;
};

// 25 ms frames / 10 ms hop, 26 mel filters, 13 coefficients averaged
// across frames.
SegmentFeatures mfcc_features(const AudioWindow& segment);

SelectorModel train_selector(
    const std::vector<std::pair<SegmentFeatures, ActivityClass>>& labeled,
    const SvmTrainConfig& cfg = {});

ActivityClass classify_segment(const SegmentFeatures& f, const SelectorModel& m);

// Classifies twelve 5 s segments of the channel-mean mixdown and majority
// votes; winner is Undetermined unless its share exceeds 0.75.
VoteResult select_pipeline(const AudioWindow& left, const AudioWindow& right,
                           const SelectorModel& m);
VoteResult select_pipeline(const AudioWindow& mono, const SelectorModel& m);

void save_model(const SelectorModel& m, const std::string& path);
SelectorModel load_model(const std::string& path);

}  // namespace rrsense

#endif
