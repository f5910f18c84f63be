#include "rowsim/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rowsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path, "", 0);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

KeyValueFile KeyValueFile::parse_text(const std::string& text,
                                      const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + body + "'",
                              body, lineno);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key",
                              "", lineno);
        if (kv.entries_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'",
                              key, lineno);
        kv.entries_[key] = Entry{value, lineno};
    }
    return kv;
}

bool KeyValueFile::has(const std::string& key) const {
    return entries_.count(key) != 0;
}

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.read = true;
    return it->second.value;
}

std::string KeyValueFile::require_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(origin_ + ": missing required field '" + key + "'", key);
    it->second.read = true;
    return it->second.value;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.read = true;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second.value, &pos);
        if (pos != it->second.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ":" + std::to_string(it->second.line) +
                              ": field '" + key + "' is not a number ('" +
                              it->second.value + "')",
                          key, it->second.line);
    }
}

double KeyValueFile::require_double(const std::string& key) const {
    if (!has(key))
        throw ConfigError(origin_ + ": missing required field '" + key + "'", key);
    return get_double(key, 0.0);
}

long KeyValueFile::get_long(const std::string& key, long fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    const long l = static_cast<long>(v);
    if (static_cast<double>(l) != v) {
        auto it = entries_.find(key);
        throw ConfigError(origin_ + ": field '" + key + "' must be an integer", key,
                          it == entries_.end() ? 0 : it->second.line);
    }
    return l;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.read = true;
    const std::string& v = it->second.value;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(origin_ + ":" + std::to_string(it->second.line) + ": field '" +
                          key + "' is not a boolean ('" + v + "')",
                      key, it->second.line);
}

std::vector<double> KeyValueFile::get_double_list(
    const std::string& key, const std::vector<double>& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.read = true;
    std::vector<double> out;
    std::stringstream ss(it->second.value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ":" + std::to_string(it->second.line) +
                                  ": field '" + key + "' has non-numeric item '" +
                                  tok + "'",
                              key, it->second.line);
        }
    }
    if (out.empty())
        throw ConfigError(origin_ + ": field '" + key + "' is an empty list", key,
                          it->second.line);
    return out;
}

std::vector<std::uint64_t> KeyValueFile::get_seed_list(
    const std::string& key, const std::vector<std::uint64_t>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> values = get_double_list(key, {});
    std::vector<std::uint64_t> out;
    for (double v : values) {
        if (v < 0 || v != std::floor(v))
            throw ConfigError(origin_ + ": field '" + key +
                                  "' must list non-negative integers",
                              key);
        out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
}

std::vector<std::string> KeyValueFile::unread_keys() const {
    std::vector<std::string> out;
    for (const auto& [key, entry] : entries_)
        if (!entry.read) out.push_back(key);
    return out;
}

void ExperimentConfig::validate() const {
    episode.pipeline.validate();
    episode.controller.validate();
    episode.rates.validate();
    if (seeds.empty()) throw ConfigError("experiment.seeds must not be empty",
                                         "experiment.seeds");
    if (episode.camera.width <= 0 || episode.camera.height <= 0)
        throw ConfigError("camera dimensions must be positive", "camera.width");
    if (episode.camera.max_range <= 0)
        throw ConfigError("camera.max_range must be positive", "camera.max_range");
    if (corruption_enabled) {
        const CorruptionModel& c = corruption;
        if (c.dropout_rate < 0 || c.dropout_rate > 1 || c.speckle_rate < 0 ||
            c.speckle_rate > 1)
            throw ConfigError("corruption rates must be in [0,1]",
                              "corruption.dropout_rate");
        if (c.confidence_noise_std < 0 || c.depth_noise_std_at_1m < 0)
            throw ConfigError("corruption noise stds must be >= 0",
                              "corruption.confidence_noise_std");
    }
}

ExperimentConfig parse_experiment_config(const KeyValueFile& kv) {
    ExperimentConfig cfg;
    cfg.preset = parse_preset(kv.get_string("world.preset", "vineyard"));

    cfg.world.row_distance = kv.get_double("world.row_distance", -1.0);
    cfg.world.plant_distance = kv.get_double("world.plant_distance", -1.0);
    cfg.world.plant_height = kv.get_double("world.plant_height", -1.0);
    cfg.world.jitter_std = kv.get_double("world.jitter_std", -1.0);
    cfg.world.track_length = kv.get_double("world.track_length", -1.0);
    cfg.world.num_rows = static_cast<int>(kv.get_long("world.num_rows", -1));
    cfg.world.curve_radius = kv.get_double("world.curve_radius", -1.0);
    cfg.world.terrain_amplitude = kv.get_double("world.terrain.amplitude", -1.0);
    cfg.world.terrain_wavelength = kv.get_double("world.terrain.wavelength", -1.0);
    cfg.world.heading_disturbance_std =
        kv.get_double("world.terrain.heading_disturbance_std", -1.0);

    PipelineConfig& pl = cfg.episode.pipeline;
    pl.variant = parse_variant(kv.get_string("pipeline.variant", "segmin"));
    pl.history_n = static_cast<int>(kv.get_long("pipeline.history", 3));
    pl.confidence_threshold = kv.get_double("pipeline.confidence_threshold", 0.5);
    pl.depth_threshold = kv.require_double("pipeline.depth_threshold");
    pl.smoothing_window = static_cast<int>(kv.get_long("pipeline.smoothing_window", 5));

    ControllerConfig& ct = cfg.episode.controller;
    ct.v_max = kv.get_double("controller.v_max", 0.5);
    ct.omega_max = kv.get_double("controller.omega_max", 1.0);
    ct.k_omega = kv.get_double("controller.k_omega", 0.01);
    ct.ema_lambda = kv.get_double("controller.ema_lambda", 0.5);
    ct.literal_eq10 = kv.get_bool("controller.literal_eq10", false);

    CameraModel& cam = cfg.episode.camera;
    cam.width = static_cast<int>(kv.get_long("camera.width", 224));
    cam.height = static_cast<int>(kv.get_long("camera.height", 224));
    cam.horizontal_fov = kv.get_double("camera.horizontal_fov", 1.204);
    cam.vertical_fov = kv.get_double("camera.vertical_fov", 1.204);
    cam.mount_offset_forward = kv.get_double("camera.mount_forward", 0.20);
    cam.mount_pitch_up = kv.get_double("camera.mount_pitch_up", 0.2618);
    cam.mount_height = kv.get_double("camera.mount_height", 0.4);
    cam.max_range = kv.get_double("camera.max_range", 20.0);
    ct.frame_width = cam.width;

    RateConfig& rates = cfg.episode.rates;
    rates.physics_hz = static_cast<int>(kv.get_long("rates.physics_hz", 120));
    rates.camera_hz = static_cast<int>(kv.get_long("rates.camera_hz", 30));
    rates.inference_hz = static_cast<int>(kv.get_long("rates.inference_hz", 20));
    rates.command_hz = static_cast<int>(kv.get_long("rates.command_hz", 5));

    cfg.corruption_enabled = kv.get_bool("corruption.enabled", false);
    cfg.corruption.dropout_rate = kv.get_double("corruption.dropout_rate", 0.10);
    cfg.corruption.speckle_rate = kv.get_double("corruption.speckle_rate", 0.02);
    cfg.corruption.confidence_noise_std =
        kv.get_double("corruption.confidence_noise_std", 0.12);
    cfg.corruption.depth_noise_std_at_1m =
        kv.get_double("corruption.depth_noise_std_at_1m", 0.01);

    EpisodeParams& ep = cfg.episode.params;
    ep.lane = static_cast<int>(kv.get_long("episode.lane", 1));
    ep.track_goal = kv.get_double("episode.track_goal", 20.0);
    ep.start_advance = kv.get_double("episode.start_advance", 1.0);
    ep.start_offset = kv.get_double("episode.start_offset", 0.0);
    ep.start_heading = kv.get_double("episode.start_heading", 0.0);
    ep.footprint_radius = kv.get_double("episode.footprint_radius", 0.3);
    ep.stall_window = kv.get_double("episode.stall_window", 5.0);
    ep.stall_min_progress = kv.get_double("episode.stall_min_progress", 0.05);
    ep.timeout = kv.get_double("episode.timeout", 150.0);

    cfg.seeds = kv.get_seed_list("experiment.seeds", {1});
    cfg.gamma_mode =
        parse_gamma_mode(kv.get_string("metrics.gamma_mode", "signed-mean"));
    cfg.out_dir = kv.get_string("experiment.out", "");

    const std::vector<std::string> unknown = kv.unread_keys();
    if (!unknown.empty())
        throw ConfigError(kv.origin() + ": unknown field '" + unknown.front() + "'",
                          unknown.front());

    if (cfg.episode.corruption) cfg.episode.corruption.reset();
    if (cfg.corruption_enabled) cfg.episode.corruption = cfg.corruption;

    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    return parse_experiment_config(KeyValueFile::parse_file(path));
}

std::string experiment_to_manifest(const ExperimentConfig& cfg) {
    std::ostringstream out;
    char buf[256];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%s = %.17g\n", key, v);
        out << buf;
    };
    auto put_long = [&](const char* key, long v) { out << key << " = " << v << "\n"; };

    out << "# rowsim run manifest (a valid config file; rerun to reproduce)\n";
    out << "world.preset = " << preset_name(cfg.preset) << "\n";
    const CropRowWorld resolved = build_world(cfg.preset, 0, cfg.world);
    put("world.row_distance", resolved.row_distance);
    put("world.plant_distance", resolved.plant_distance);
    if (cfg.world.plant_height > 0) put("world.plant_height", cfg.world.plant_height);
    put("world.jitter_std", resolved.rows.front().spec.jitter_std);
    put("world.track_length", resolved.track_length);
    put_long("world.num_rows", static_cast<long>(resolved.rows.size()));
    if (resolved.curve_radius > 0) put("world.curve_radius", resolved.curve_radius);
    put("world.terrain.amplitude", resolved.terrain.height_amplitude);
    put("world.terrain.wavelength", resolved.terrain.height_wavelength);
    put("world.terrain.heading_disturbance_std",
        resolved.terrain.heading_disturbance_std);

    const PipelineConfig& pl = cfg.episode.pipeline;
    out << "pipeline.variant = " << variant_name(pl.variant) << "\n";
    put_long("pipeline.history", pl.history_n);
    put("pipeline.confidence_threshold", pl.confidence_threshold);
    put("pipeline.depth_threshold", pl.depth_threshold);
    put_long("pipeline.smoothing_window", pl.smoothing_window);

    const ControllerConfig& ct = cfg.episode.controller;
    put("controller.v_max", ct.v_max);
    put("controller.omega_max", ct.omega_max);
    put("controller.k_omega", ct.k_omega);
    put("controller.ema_lambda", ct.ema_lambda);
    out << "controller.literal_eq10 = " << (ct.literal_eq10 ? "true" : "false")
        << "\n";

    const CameraModel& cam = cfg.episode.camera;
    put_long("camera.width", cam.width);
    put_long("camera.height", cam.height);
    put("camera.horizontal_fov", cam.horizontal_fov);
    put("camera.vertical_fov", cam.vertical_fov);
    put("camera.mount_forward", cam.mount_offset_forward);
    put("camera.mount_pitch_up", cam.mount_pitch_up);
    put("camera.mount_height", cam.mount_height);
    put("camera.max_range", cam.max_range);

    const RateConfig& rates = cfg.episode.rates;
    put_long("rates.physics_hz", rates.physics_hz);
    put_long("rates.camera_hz", rates.camera_hz);
    put_long("rates.inference_hz", rates.inference_hz);
    put_long("rates.command_hz", rates.command_hz);

    out << "corruption.enabled = " << (cfg.corruption_enabled ? "true" : "false")
        << "\n";
    put("corruption.dropout_rate", cfg.corruption.dropout_rate);
    put("corruption.speckle_rate", cfg.corruption.speckle_rate);
    put("corruption.confidence_noise_std", cfg.corruption.confidence_noise_std);
    put("corruption.depth_noise_std_at_1m", cfg.corruption.depth_noise_std_at_1m);

    const EpisodeParams& ep = cfg.episode.params;
    put_long("episode.lane", ep.lane);
    put("episode.track_goal", ep.track_goal);
    put("episode.start_advance", ep.start_advance);
    put("episode.start_offset", ep.start_offset);
    put("episode.start_heading", ep.start_heading);
    put("episode.footprint_radius", ep.footprint_radius);
    put("episode.stall_window", ep.stall_window);
    put("episode.stall_min_progress", ep.stall_min_progress);
    put("episode.timeout", ep.timeout);

    out << "experiment.seeds = ";
    for (std::size_t k = 0; k < cfg.seeds.size(); ++k)
        out << (k ? "," : "") << cfg.seeds[k];
    out << "\n";
    out << "metrics.gamma_mode = " << gamma_mode_name(cfg.gamma_mode) << "\n";
    return out.str();
}

}  // namespace rowsim
