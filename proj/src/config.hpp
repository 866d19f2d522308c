#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace feedpipe {

/// Bad configuration (unknown key, unparseable or out-of-range value). The
/// CLI maps this to the usage exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PipelineConfig {
    int timeout_secs = 20;
    std::string user_agent = "feedpipe/1.0";
    int max_concurrency = 4;
    int retry_wait_1_ms = 5000;
    int retry_wait_2_ms = 15000;
    std::uint64_t seed = 0;
    std::size_t subtitle_max_chars = 300;
    std::size_t title_max_chars = 200;
    std::string out_dir = "out";
};

/// Flat key=value text, one pair per line; '#' starts a comment. Unknown keys
/// and invalid values throw ConfigError. Returns defaults updated by the
/// file's pairs.
PipelineConfig parse_config(const std::string& text, const PipelineConfig& base = {});

/// parse_config over a file's bytes; unreadable path throws ConfigError.
PipelineConfig load_config_file(const std::string& path, const PipelineConfig& base = {});

/// Range checks shared by file and flag inputs; throws ConfigError.
void validate_config(const PipelineConfig& config);

}  // namespace feedpipe
