// Command-line front end: estimate RR from WAV recordings, generate
// synthetic test audio, and build the selector model / breathing template.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "rrsense/corpus.hpp"
#include "rrsense/pipeline.hpp"
#include "rrsense/synth.hpp"
#include "rrsense/wav.hpp"

namespace {

using namespace rrsense;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;

struct CommonArgs {
    std::string input;
    std::string config;
    std::string output;
    std::string format = "csv";
    std::string force = "auto";
    double window_sec = -1.0;
    double overlap_sec = -1.0;
    std::size_t workers = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--input", a.input, "input WAV file")->required();
    cmd->add_option("--config", a.config, "config file (key = value lines)");
    cmd->add_option("--output", a.output, "output file (default stdout)");
    cmd->add_option("--format", a.format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("--force-pipeline", a.force, "auto, rsa, lrc-low or lrc-high")
        ->check(CLI::IsMember({"auto", "rsa", "lrc-low", "lrc-high"}));
    cmd->add_option("--window-sec", a.window_sec, "estimation window length");
    cmd->add_option("--overlap-sec", a.overlap_sec, "window overlap");
    cmd->add_option("--workers", a.workers, "worker threads");
}

PipelineConfig resolve_config(const CommonArgs& a) {
    PipelineConfig cfg;
    if (!a.config.empty()) cfg = load_config(a.config);
    if (a.window_sec > 0.0) cfg.window_s = a.window_sec;
    if (a.overlap_sec >= 0.0) cfg.overlap_s = a.overlap_sec;
    if (a.workers > 0) cfg.workers = a.workers;
    if (a.force == "rsa") cfg.force = ForcedPipeline::Rsa;
    else if (a.force == "lrc-low") cfg.force = ForcedPipeline::LrcLow;
    else if (a.force == "lrc-high") cfg.force = ForcedPipeline::LrcHigh;
    if (!(cfg.overlap_s >= 0.0) || !(cfg.overlap_s < cfg.window_s))
        throw config_error("need 0 <= overlap < window");
    return cfg;
}

RunResult run_on_file(const CommonArgs& a, const PipelineConfig& cfg,
                      bool collect_traces) {
    const auto channels = read_wav(a.input);

    std::optional<SelectorModel> model;
    std::optional<BreathingTemplate> tmpl;
    if (cfg.force == ForcedPipeline::Auto) {
        if (cfg.model_path.empty())
            throw config_error("auto pipeline selection needs model_path");
        model = load_model(cfg.model_path);
    }
    if (cfg.force != ForcedPipeline::Rsa) {
        if (cfg.template_path.empty())
            throw config_error("LRC processing needs template_path");
        tmpl = load_template(cfg.template_path);
    }
    return run(channels, cfg, model ? &*model : nullptr, tmpl ? &*tmpl : nullptr,
               collect_traces);
}

void write_results(const CommonArgs& a, const std::vector<RrEstimate>& estimates) {
    const OutputFormat fmt =
        a.format == "jsonl" ? OutputFormat::Jsonl : OutputFormat::Csv;
    if (a.output.empty()) {
        emit_results(estimates, fmt, std::cout);
    } else {
        std::ofstream out(a.output);
        if (!out) throw wav_error("cannot open output file " + a.output);
        emit_results(estimates, fmt, out);
    }
}

int cmd_estimate(const CommonArgs& a) {
    const PipelineConfig cfg = resolve_config(a);
    const RunResult result = run_on_file(a, cfg, false);
    write_results(a, result.estimates);
    return kExitOk;
}

int cmd_plot_data(const CommonArgs& a, const std::string& out_dir) {
    const PipelineConfig cfg = resolve_config(a);
    const RunResult result = run_on_file(a, cfg, true);
    std::filesystem::create_directories(out_dir);

    auto dump = [&](const std::string& name, const std::vector<double>& v,
                    double rate) {
        std::ofstream out(out_dir + "/" + name);
        out.precision(10);
        for (std::size_t i = 0; i < v.size(); ++i)
            out << static_cast<double>(i) / rate << ' ' << v[i] << '\n';
    };

    for (const auto& trace : result.traces) {
        const std::string prefix = "window" + std::to_string(trace.window_index);
        if (trace.rsa && trace.rsa->selected_hrv) {
            const auto& hrv = trace.rsa->selected_hrv->resampled;
            dump(prefix + "_hrv.txt", hrv.samples, hrv.sample_rate);
        }
        if (trace.lrc) {
            dump(prefix + "_probability.txt", trace.lrc->curve.values,
                 trace.lrc->curve.rate());
            dump(prefix + "_breathing.txt", trace.lrc->breathing_pattern,
                 trace.lrc->curve.rate());
        }
    }
    write_results(a, result.estimates);
    return kExitOk;
}

void write_truth(const std::string& path, const std::vector<double>& times,
                 const std::string& label) {
    std::ofstream out(path, std::ios::app);
    out.precision(10);
    for (double t : times) out << label << ' ' << t << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"In-ear audio respiratory rate estimation"};
    app.require_subcommand(1);

    CommonArgs est_args;
    auto* est = app.add_subcommand("estimate", "estimate RR from a WAV recording");
    add_common(est, est_args);

    CommonArgs plot_args;
    std::string plot_dir = "plot-data";
    auto* plot = app.add_subcommand(
        "plot-data", "estimate and dump per-window intermediate series");
    add_common(plot, plot_args);
    plot->add_option("--output-dir", plot_dir, "directory for the series files");

    auto* synth = app.add_subcommand("synth", "generate synthetic test audio");
    std::string synth_type = "sedentary", synth_out = "synth.wav";
    double hr = 70.0, rr = 15.0, depth = 0.04, stride = 2.0, snr = 1e9;
    double duration = 150.0, sample_rate = 22050.0;
    int lrc_ratio = 3;
    std::uint64_t seed = 1;
    synth->add_option("--type", synth_type, "sedentary or active")
        ->check(CLI::IsMember({"sedentary", "active"}));
    synth->add_option("--output", synth_out, "output WAV path")->required();
    synth->add_option("--hr", hr, "mean heart rate, BPM");
    synth->add_option("--rr", rr, "respiratory rate, BPM");
    synth->add_option("--rsa-depth", depth, "peak IBI deviation, seconds");
    synth->add_option("--stride", stride, "steps per second");
    synth->add_option("--lrc", lrc_ratio, "steps per breath");
    synth->add_option("--snr", snr, "additive noise SNR, dB");
    synth->add_option("--duration", duration, "seconds");
    synth->add_option("--sample-rate", sample_rate, "Hz");
    synth->add_option("--seed", seed, "RNG seed");

    auto* train = app.add_subcommand(
        "train-selector", "train the pipeline-selector SVM on a synthetic corpus");
    std::string model_out = "selector.model";
    std::size_t per_class = 100;
    std::uint64_t train_seed = 11;
    train->add_option("--output", model_out, "model file path");
    train->add_option("--per-class", per_class, "segments per class");
    train->add_option("--seed", train_seed, "corpus seed");

    auto* tmpl_cmd = app.add_subcommand(
        "build-template", "build the breathing template from a reference WAV");
    std::string tmpl_in, tmpl_out = "breathing.template";
    double band_low = 300.0, band_high = 1800.0;
    tmpl_cmd->add_option("--input", tmpl_in,
                         "reference recording (omit for the synthetic breath model)");
    tmpl_cmd->add_option("--output", tmpl_out, "template file path");
    tmpl_cmd->add_option("--band-low", band_low, "Hz");
    tmpl_cmd->add_option("--band-high", band_high, "Hz");

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed()) return cmd_estimate(est_args);
        if (plot->parsed()) return cmd_plot_data(plot_args, plot_dir);

        if (synth->parsed()) {
            const std::string truth_path = synth_out + ".truth.txt";
            std::ofstream(truth_path, std::ios::trunc).close();
            if (synth_type == "sedentary") {
                rrsense::SedentaryScenario sc;
                sc.mean_hr = hr;
                sc.rr = rr;
                sc.rsa_depth = depth;
                sc.noise_snr = snr >= 1e9 ? rrsense::kSnrClean : snr;
                sc.duration = duration;
                sc.sample_rate = sample_rate;
                sc.seed = seed;
                const auto audio = rrsense::synth_sedentary(sc);
                rrsense::write_wav(synth_out, {audio.left.signal, audio.right.signal});
                write_truth(truth_path, audio.truth.beat_times, "beat");
                std::ofstream(truth_path, std::ios::app) << "rr " << audio.truth.rr << "\n";
            } else {
                rrsense::ActiveScenario sc;
                sc.stride = stride;
                sc.lrc_schedule = {{0.0, lrc_ratio}};
                sc.noise_snr = snr >= 1e9 ? rrsense::kSnrClean : snr;
                sc.duration = duration;
                sc.sample_rate = sample_rate;
                sc.seed = seed;
                const auto audio = rrsense::synth_active(sc);
                rrsense::write_wav(synth_out, {audio.left.signal, audio.right.signal});
                write_truth(truth_path, audio.truth.step_times, "step");
                write_truth(truth_path, audio.truth.breath_times, "breath");
                std::ofstream(truth_path, std::ios::app) << "rr " << audio.truth.rr << "\n";
            }
            return kExitOk;
        }

        if (train->parsed()) {
            rrsense::CorpusConfig cc;
            cc.per_class = per_class;
            cc.seed = train_seed;
            const auto corpus = rrsense::make_segment_corpus(cc);
            std::vector<std::pair<rrsense::SegmentFeatures, rrsense::ActivityClass>> labeled;
            labeled.reserve(corpus.size());
            for (const auto& [w, cls] : corpus)
                labeled.emplace_back(rrsense::mfcc_features(w), cls);
            const auto model = rrsense::train_selector(labeled);
            rrsense::save_model(model, model_out);
            std::cerr << "wrote " << model_out << "\n";
            return kExitOk;
        }

        if (tmpl_cmd->parsed()) {
            rrsense::BreathingTemplate tmpl;
            if (tmpl_in.empty()) {
                tmpl = rrsense::make_default_template(band_low, band_high);
            } else {
                const auto channels = rrsense::read_wav(tmpl_in);
                rrsense::AudioWindow ref;
                ref.signal = channels.front();
                tmpl = rrsense::build_breathing_template(ref, band_low, band_high);
            }
            rrsense::save_template(tmpl, tmpl_out);
            std::cerr << "wrote " << tmpl_out << "\n";
            return kExitOk;
        }
    } catch (const rrsense::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
