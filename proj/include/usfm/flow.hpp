#pragma once

#include <optional>
#include <string_view>

namespace usfm {

enum class FlowDirection { Input, Output };

inline std::string_view to_string(FlowDirection d) {
    return d == FlowDirection::Input ? "input" : "output";
}

inline std::optional<FlowDirection> flow_direction_from(std::string_view s) {
    if (s == "input") return FlowDirection::Input;
    if (s == "output") return FlowDirection::Output;
    return std::nullopt;
}

}  // namespace usfm
