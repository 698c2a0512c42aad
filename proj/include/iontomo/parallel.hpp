#pragma once

#include <cstddef>
#include <functional>

namespace iontomo {

/// Process-wide switch; when set every parallel loop runs on the caller.
void set_serial(bool serial);
bool serial_mode();

/// Runs body(i) for i in [0, n). Iterations must be independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace iontomo
