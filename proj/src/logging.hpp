#pragma once

#include <string>
#include <utility>
#include <vector>

namespace feedpipe {

/// Line-delimited JSON on stderr: {"ts":...,"level":...,"event":...,...}.
/// Safe to call from multiple threads.
void log_event(const std::string& level, const std::string& event,
               const std::vector<std::pair<std::string, std::string>>& fields = {});

void log_info(const std::string& event,
              const std::vector<std::pair<std::string, std::string>>& fields = {});
void log_warn(const std::string& event,
              const std::vector<std::pair<std::string, std::string>>& fields = {});
void log_error(const std::string& event,
               const std::vector<std::pair<std::string, std::string>>& fields = {});

}  // namespace feedpipe
