#ifndef RRSENSE_PIPELINE_HPP
#define RRSENSE_PIPELINE_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rrsense/lrc.hpp"
#include "rrsense/rsa.hpp"
#include "rrsense/selector.hpp"
#include "rrsense/types.hpp"

namespace rrsense {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ForcedPipeline { Auto, Rsa, LrcLow, LrcHigh };

struct PipelineConfig {
    double window_s = 60.0;
    double overlap_s = 30.0;
    RsaConfig rsa;
    LrcConfig lrc;
    std::string template_path;
    std::string model_path;
    ForcedPipeline force = ForcedPipeline::Auto;
    std::size_t workers = 1;
};

// Flat key = value text; '#' starts a comment. Unknown keys are rejected.
PipelineConfig load_config(const std::string& path);
void apply_config_line(PipelineConfig& cfg, const std::string& key,
                       const std::string& value);

struct WindowSpan {
    double start = 0.0;
    double end = 0.0;
};

std::vector<WindowSpan> segment_windows(double duration, double window_s,
                                        double overlap_s);

struct WindowTrace {
    std::size_t window_index = 0;
    std::optional<RsaTrace> rsa;
    std::optional<LrcTrace> lrc;
};

struct RunResult {
    std::vector<RrEstimate> estimates;
    std::vector<WindowTrace> traces;  // filled only when requested
};

RunResult run(const std::vector<Signal>& channels, const PipelineConfig& cfg,
              const SelectorModel* model, const BreathingTemplate* tmpl,
              bool collect_traces = false);

enum class OutputFormat { Csv, Jsonl };

void emit_results(const std::vector<RrEstimate>& estimates, OutputFormat fmt,
                  std::ostream& out);
std::vector<RrEstimate> parse_csv_results(std::istream& in);

}  // namespace rrsense

#endif
