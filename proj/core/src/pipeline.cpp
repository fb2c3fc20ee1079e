#include "rrsense/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace rrsense {

std::string to_string(ActivityClass c) {
    switch (c) {
        case ActivityClass::Sedentary: return "sedentary";
        case ActivityClass::ActiveLow: return "active-low";
        case ActivityClass::ActiveHigh: return "active-high";
        default: return "undetermined";
    }
}

std::string to_string(PipelineKind p) {
    return p == PipelineKind::Rsa ? "rsa" : "lrc";
}

bool activity_from_string(const std::string& s, ActivityClass& out) {
    if (s == "sedentary") out = ActivityClass::Sedentary;
    else if (s == "active-low") out = ActivityClass::ActiveLow;
    else if (s == "active-high") out = ActivityClass::ActiveHigh;
    else if (s == "undetermined") out = ActivityClass::Undetermined;
    else return false;
    return true;
}

std::vector<WindowSpan> segment_windows(double duration, double window_s,
                                        double overlap_s) {
    if (!(window_s > 0.0) || overlap_s < 0.0 || overlap_s >= window_s)
        throw config_error("segment_windows: need 0 <= overlap < window");
    std::vector<WindowSpan> out;
    const double step = window_s - overlap_s;
    for (double start = 0.0; start + window_s <= duration + 1e-9; start += step)
        out.push_back({start, start + window_s});
    return out;
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("config: bad numeric value for " + key + ": " + value);
    }
}

}  // namespace

void apply_config_line(PipelineConfig& cfg, const std::string& key,
                       const std::string& value) {
    if (key == "window_s") cfg.window_s = parse_double(key, value);
    else if (key == "overlap_s") cfg.overlap_s = parse_double(key, value);
    else if (key == "w") cfg.rsa.candidate_width = parse_double(key, value);
    else if (key == "T") cfg.lrc.probability_threshold = parse_double(key, value);
    else if (key == "threshold_factor") cfg.rsa.interference_factor = parse_double(key, value);
    else if (key == "interference_filtering")
        cfg.rsa.interference_filtering = parse_double(key, value) != 0.0;
    else if (key == "lrc_low_min") cfg.lrc.low_intensity.lrc_min = parse_double(key, value);
    else if (key == "lrc_low_max") cfg.lrc.low_intensity.lrc_max = parse_double(key, value);
    else if (key == "lrc_high_min") cfg.lrc.high_intensity.lrc_min = parse_double(key, value);
    else if (key == "lrc_high_max") cfg.lrc.high_intensity.lrc_max = parse_double(key, value);
    else if (key == "ssa_max_components")
        cfg.lrc.ssa_max_components = static_cast<std::size_t>(parse_double(key, value));
    else if (key == "ssa_window_divisor")
        cfg.lrc.ssa_window_divisor = static_cast<std::size_t>(parse_double(key, value));
    else if (key == "template_path") cfg.template_path = value;
    else if (key == "model_path") cfg.model_path = value;
    else if (key == "workers")
        cfg.workers = static_cast<std::size_t>(parse_double(key, value));
    else throw config_error("config: unknown key " + key);
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    PipelineConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(lineno) +
                               " is not key = value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    if (!(cfg.overlap_s >= 0.0) || !(cfg.overlap_s < cfg.window_s))
        throw config_error("config: need 0 <= overlap_s < window_s");
    return cfg;
}

namespace {

AudioWindow slice(const Signal& s, const WindowSpan& span, Channel tag) {
    AudioWindow w;
    w.channel = tag;
    w.signal.sample_rate = s.sample_rate;
    const auto a = static_cast<std::size_t>(std::lround(span.start * s.sample_rate));
    const auto b = static_cast<std::size_t>(std::lround(span.end * s.sample_rate));
    w.signal.samples.assign(s.samples.begin() + static_cast<long>(a),
                            s.samples.begin() + static_cast<long>(std::min(b, s.size())));
    return w;
}

RrEstimate process_window(const std::vector<Signal>& channels, const WindowSpan& span,
                          const PipelineConfig& cfg, const SelectorModel* model,
                          const BreathingTemplate* tmpl, WindowTrace* trace) {
    std::optional<AudioWindow> left = slice(channels[0], span, Channel::Left);
    std::optional<AudioWindow> right;
    if (channels.size() > 1) right = slice(channels[1], span, Channel::Right);

    ActivityClass cls = ActivityClass::Undetermined;
    switch (cfg.force) {
        case ForcedPipeline::Rsa: cls = ActivityClass::Sedentary; break;
        case ForcedPipeline::LrcLow: cls = ActivityClass::ActiveLow; break;
        case ForcedPipeline::LrcHigh: cls = ActivityClass::ActiveHigh; break;
        case ForcedPipeline::Auto: {
            if (!model) throw config_error("run: selector model required in auto mode");
            const VoteResult vote = right ? select_pipeline(*left, *right, *model)
                                          : select_pipeline(*left, *model);
            cls = vote.winner;
            break;
        }
    }

    RrEstimate est;
    if (cls == ActivityClass::Undetermined) {
        est.activity = cls;
        est.valid = false;
    } else if (cls == ActivityClass::Sedentary) {
        RsaTrace* rt = nullptr;
        if (trace) rt = &trace->rsa.emplace();
        est = estimate_rr_rsa(left, right, cfg.rsa, rt);
    } else {
        if (!tmpl) throw config_error("run: breathing template required for LRC");
        if (cls == ActivityClass::ActiveHigh &&
            left->signal.sample_rate < 2.0 * cfg.lrc.high_intensity.band_high) {
            std::cerr << "warning: sample rate too low for the high-intensity band; "
                         "using the low-intensity band\n";
            cls = ActivityClass::ActiveLow;
        }
        LrcTrace* lt = nullptr;
        if (trace) lt = &trace->lrc.emplace();
        est = estimate_rr_lrc(left, right, cls, *tmpl, cfg.lrc, lt);
    }
    est.window_start = span.start;
    est.window_end = span.end;
    return est;
}

}  // namespace

RunResult run(const std::vector<Signal>& channels, const PipelineConfig& cfg,
              const SelectorModel* model, const BreathingTemplate* tmpl,
              bool collect_traces) {
    if (channels.empty()) throw parameter_error("run: no input channels");
    const double duration = channels.front().duration();
    const auto spans = segment_windows(duration, cfg.window_s, cfg.overlap_s);

    RunResult result;
    result.estimates.resize(spans.size());
    if (collect_traces) result.traces.resize(spans.size());

    const std::size_t workers =
        std::max<std::size_t>(1, std::min(cfg.workers, spans.size() ? spans.size() : 1));

    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < spans.size(); i += stride) {
            WindowTrace* trace = collect_traces ? &result.traces[i] : nullptr;
            if (trace) trace->window_index = i;
            result.estimates[i] =
                process_window(channels, spans[i], cfg, model, tmpl, trace);
        }
    };

    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
        for (auto& th : pool) th.join();
    }
    return result;
}

namespace {

std::string format_rr(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void emit_results(const std::vector<RrEstimate>& estimates, OutputFormat fmt,
                  std::ostream& out) {
    if (fmt == OutputFormat::Csv) {
        out << "window_start_s,window_end_s,pipeline,activity,rr_bpm,valid\n";
        for (const auto& e : estimates) {
            out << format_rr(e.window_start) << ',' << format_rr(e.window_end) << ','
                << to_string(e.pipeline) << ',' << to_string(e.activity) << ','
                << (e.valid ? format_rr(e.rr_bpm) : std::string()) << ','
                << (e.valid ? "true" : "false") << '\n';
        }
    } else {
        for (const auto& e : estimates) {
            out << "{\"window_start_s\":" << format_rr(e.window_start)
                << ",\"window_end_s\":" << format_rr(e.window_end)
                << ",\"pipeline\":\"" << to_string(e.pipeline)
                << "\",\"activity\":\"" << to_string(e.activity) << "\",\"rr_bpm\":"
                << (e.valid ? format_rr(e.rr_bpm) : std::string("null"))
                << ",\"valid\":" << (e.valid ? "true" : "false") << "}\n";
        }
    }
}

std::vector<RrEstimate> parse_csv_results(std::istream& in) {
    std::vector<RrEstimate> out;
    std::string line;
    if (!std::getline(in, line) ||
        line != "window_start_s,window_end_s,pipeline,activity,rr_bpm,valid")
        throw parameter_error("parse_csv_results: missing or malformed header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        while (fields.size() < 6) fields.emplace_back();
        if (fields.size() != 6)
            throw parameter_error("parse_csv_results: bad row: " + line);
        RrEstimate e;
        e.window_start = std::stod(fields[0]);
        e.window_end = std::stod(fields[1]);
        e.pipeline = fields[2] == "rsa" ? PipelineKind::Rsa : PipelineKind::Lrc;
        if (!activity_from_string(fields[3], e.activity))
            throw parameter_error("parse_csv_results: bad activity: " + fields[3]);
        e.valid = fields[5] == "true";
        e.rr_bpm = e.valid ? std::stod(fields[4]) : 0.0;
        out.push_back(e);
    }
    return out;
}

}  // namespace rrsense
