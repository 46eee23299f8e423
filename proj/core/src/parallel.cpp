#include "rvm/parallel.hpp"

#include <cstdlib>
#include <string>

namespace rvm {

int workers_from_env(int fallback) {
  const char* v = std::getenv("RVM_WORKERS");
  if (!v || !*v) return fallback;
  try {
    const int n = std::stoi(v);
    return n > 0 ? n : fallback;
  } catch (const std::exception&) {
    return fallback;
  }
}

}  // namespace rvm
