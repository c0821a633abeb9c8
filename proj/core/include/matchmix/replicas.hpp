#pragma once

#include <cstddef>
#include <functional>

namespace matchmix {

// Runs body(i) for i in [0, count). The harness supplies a threaded runner;
// library code only ever calls through this.
using ReplicaRunner =
    std::function<void(std::size_t count, const std::function<void(std::size_t)>& body)>;

inline void run_serial(std::size_t count, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace matchmix
