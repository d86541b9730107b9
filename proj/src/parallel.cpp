#include "kp/parallel.hpp"

#include <cstdlib>
#include <string>

namespace kp {

unsigned default_workers() {
  if (const char* env = std::getenv("KP_THREADS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<unsigned>(value);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1U : hw;
}

}  // namespace kp
