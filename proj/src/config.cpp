#include "config.hpp"

#include <fstream>
#include <sstream>

#include "strings.hpp"

namespace feedpipe {

namespace {

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        long long parsed = std::stoll(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not an integer: " + value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    // stoull silently wraps negative input, so require plain digits up front.
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("config key " + key + ": not an unsigned integer: " + value);
    try {
        std::size_t used = 0;
        unsigned long long parsed = std::stoull(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not an unsigned integer: " + value);
    }
}

}  // namespace

PipelineConfig parse_config(const std::string& text, const PipelineConfig& base) {
    PipelineConfig config = base;
    std::istringstream in(text);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#')
            continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_number) +
                              ": expected key=value, got: " + stripped);
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));

        if (key == "timeout_secs")
            config.timeout_secs = static_cast<int>(parse_int(key, value));
        else if (key == "user_agent")
            config.user_agent = value;
        else if (key == "max_concurrency")
            config.max_concurrency = static_cast<int>(parse_int(key, value));
        else if (key == "retry_wait_1_ms")
            config.retry_wait_1_ms = static_cast<int>(parse_int(key, value));
        else if (key == "retry_wait_2_ms")
            config.retry_wait_2_ms = static_cast<int>(parse_int(key, value));
        else if (key == "seed")
            config.seed = parse_u64(key, value);
        else if (key == "subtitle_max_chars")
            config.subtitle_max_chars = static_cast<std::size_t>(parse_u64(key, value));
        else if (key == "title_max_chars")
            config.title_max_chars = static_cast<std::size_t>(parse_u64(key, value));
        else if (key == "out_dir")
            config.out_dir = value;
        else
            throw ConfigError("config line " + std::to_string(line_number) + ": unknown key: " + key);
    }
    validate_config(config);
    return config;
}

PipelineConfig load_config_file(const std::string& path, const PipelineConfig& base) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str(), base);
}

void validate_config(const PipelineConfig& config) {
    if (config.timeout_secs <= 0)
        throw ConfigError("timeout_secs must be positive");
    if (config.max_concurrency < 1)
        throw ConfigError("max_concurrency must be at least 1");
    if (config.retry_wait_1_ms <= 0 || config.retry_wait_2_ms <= 0)
        throw ConfigError("retry waits must be positive");
    if (config.user_agent.empty())
        throw ConfigError("user_agent must not be empty");
}

}  // namespace feedpipe
