#include "sswalk/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace sswalk {

int resolve_thread_count(std::optional<int> requested) {
  if (requested) {
    if (*requested < 1) throw std::invalid_argument("thread count must be positive, got " + std::to_string(*requested));
    return *requested;
  }
  if (const char* env = std::getenv("SSWALK_THREADS"); env != nullptr && *env != '\0') {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(env, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || env[used] != '\0' || value < 1) {
      throw std::invalid_argument(std::string("SSWALK_THREADS must be a positive integer, got '") + env + "'");
    }
    return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace sswalk
