#pragma once

namespace antiholo {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace antiholo
