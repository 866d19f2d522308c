#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace feedpipe {

/// Complete ISO 639-1 (two-letter) to ISO 639-3 (three-letter) mapping,
/// embedded so runs are deterministic and offline.
const std::map<std::string, std::string>& iso639_1_to_3();

/// Version stamp for the embedded table, printed by --version.
extern const char* kLanguageTableVersion;

/// Primary-language subtag of a BCP 47 tag mapped to ISO 639-3: "en-US" ->
/// ["eng"], "de" -> ["deu"]. Three-letter subtags pass through only when they
/// appear in the embedded table; unknown or absent input -> [].
std::vector<std::string> get_languages(const std::optional<std::string>& tag);

}  // namespace feedpipe
