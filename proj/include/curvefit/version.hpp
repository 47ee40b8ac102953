#pragma once

namespace curvefit {

inline constexpr const char* version = "0.1.0";

}  // namespace curvefit
