#include "habitpath/parallel.hpp"

#include <cstdlib>
#include <string>

namespace habitpath {

unsigned worker_count() {
  if (const char* env = std::getenv("HABITPATH_THREADS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
      // Unparseable values fall back to the hardware default.
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace habitpath
