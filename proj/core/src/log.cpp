#include "ambispot/log.hpp"

#include <cstdio>
#include <mutex>

namespace ambispot {

void log_warning(const std::string& message) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::fprintf(stderr, "warning: %s\n", message.c_str());
}

}  // namespace ambispot
