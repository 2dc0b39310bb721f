#pragma once

#include <cstdint>
#include <string_view>

namespace hdx {

enum class Label : std::uint8_t { kNormal = 0, kAnomalous = 1 };

// "normal" maps to kNormal; every other label string is an attack.
Label label_from_string(std::string_view name) noexcept;
std::string_view label_name(Label label) noexcept;

}  // namespace hdx
