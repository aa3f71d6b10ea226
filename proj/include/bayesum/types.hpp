#pragma once

#include <cstdint>

namespace bayesum {

using TokenId = std::uint32_t;

}  // namespace bayesum
