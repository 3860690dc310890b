#include "bdg/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bdg/errors.hpp"

namespace bdg::parallel {

void configure_from_env() {
  const char* value = std::getenv("BDG_THREADS");
  if (!value || !*value) return;
  char* end = nullptr;
  const long n = std::strtol(value, &end, 10);
  if (*end != '\0' || n <= 0) throw ConfigError(std::string("BDG_THREADS: expected a positive integer, got '") + value + "'");
#ifdef _OPENMP
  omp_set_num_threads(static_cast<int>(n));
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace bdg::parallel
