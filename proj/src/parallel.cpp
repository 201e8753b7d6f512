#include "l1cert/parallel.hpp"

#include <cstdlib>
#include <string>

namespace l1cert {

unsigned default_workers() {
  if (const char* env = std::getenv("L1CERT_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

}  // namespace l1cert
