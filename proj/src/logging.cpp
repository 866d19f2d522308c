#include "logging.hpp"

#include <cstdio>
#include <mutex>

#include "json.hpp"

#include "datetime.hpp"

namespace feedpipe {

void log_event(const std::string& level, const std::string& event,
               const std::vector<std::pair<std::string, std::string>>& fields) {
    nlohmann::ordered_json line;
    line["ts"] = format_iso8601(utc_now());
    line["level"] = level;
    line["event"] = event;
    for (const auto& [key, value] : fields)
        line[key] = value;

    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::fputs(line.dump().c_str(), stderr);
    std::fputc('\n', stderr);
}

void log_info(const std::string& event,
              const std::vector<std::pair<std::string, std::string>>& fields) {
    log_event("info", event, fields);
}

void log_warn(const std::string& event,
              const std::vector<std::pair<std::string, std::string>>& fields) {
    log_event("warn", event, fields);
}

void log_error(const std::string& event,
               const std::vector<std::pair<std::string, std::string>>& fields) {
    log_event("error", event, fields);
}

}  // namespace feedpipe
