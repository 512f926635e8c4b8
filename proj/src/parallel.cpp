#include "lmqf/parallel.hpp"

#include <cstdlib>
#include <string>

namespace lmqf {

unsigned default_workers() {
  if (const char* env = std::getenv("LMQF_WORKERS")) {
    try {
      const long value = std::stol(env);
      if (value >= 1) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace lmqf
