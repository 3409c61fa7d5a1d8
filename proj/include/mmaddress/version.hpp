#pragma once

namespace mmaddress {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mmaddress
