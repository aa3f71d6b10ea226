#pragma once

#include <string>
#include <string_view>

namespace bayesum {

/// Porter (1980) suffix-stripping stemmer, following the reference C
/// implementation distributed by Martin Porter (including its two documented
/// departures: "bli" -> "ble" and "logi" -> "log").
///
/// Input is expected to be lowercase ASCII letters; words of length <= 2
/// are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace bayesum
