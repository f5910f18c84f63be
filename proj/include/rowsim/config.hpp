#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rowsim/camera.hpp"
#include "rowsim/metrics.hpp"
#include "rowsim/sim_loop.hpp"
#include "rowsim/world.hpp"

namespace rowsim {

/// Config/validation failure with the offending file, line and field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, std::string field, int line = 0)
        : std::runtime_error(message), field_(std::move(field)), line_(line) {}

    const std::string& field() const { return field_; }
    int line() const { return line_; }

private:
    std::string field_;
    int line_;
};

/// Plain-text `section.key = value` file; '#' starts a comment. Values keep
/// their source line for diagnostics.
class KeyValueFile {
public:
    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_text(const std::string& text,
                                   const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    double require_double(const std::string& key) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;
    std::vector<std::uint64_t> get_seed_list(
        const std::string& key, const std::vector<std::uint64_t>& fallback) const;

    /// Keys that were never read; used to reject unknown fields.
    std::vector<std::string> unread_keys() const;
    const std::string& origin() const { return origin_; }

private:
    struct Entry {
        std::string value;
        int line;
        mutable bool read{false};
    };
    std::string origin_;
    std::map<std::string, Entry> entries_;
};

/// Fully resolved experiment description: world recipe, pipeline, control,
/// rates, corruption, episode shape and replica seeds.
struct ExperimentConfig {
    CropPreset preset{CropPreset::Vineyard};
    WorldOverrides world;
    EpisodeConfig episode;
    bool corruption_enabled{false};
    CorruptionModel corruption;  // template; per-frame seeds are derived
    std::vector<std::uint64_t> seeds{1};
    GammaMode gamma_mode{GammaMode::SignedMean};
    std::string out_dir;

    void validate() const;
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const KeyValueFile& kv);

/// Serializes every resolved field (defaults included); the result is a
/// valid config file that reproduces the run bit for bit.
std::string experiment_to_manifest(const ExperimentConfig& config);

}  // namespace rowsim
