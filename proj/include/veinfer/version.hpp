#pragma once

namespace veinfer {

inline constexpr const char* version = "0.1.0";

}
