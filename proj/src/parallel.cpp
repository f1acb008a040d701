#include "degreenet/parallel.hpp"

#include <cstdlib>
#include <string>

namespace degreenet {

int default_threads() {
  if (const char* env = std::getenv("DEGREENET_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace degreenet
