#include "pgsw/parallel.hpp"

namespace pgsw {

namespace {
std::atomic<unsigned> g_default_threads{1};
}

void set_default_threads(unsigned threads) { g_default_threads.store(threads == 0 ? 1 : threads); }

unsigned default_threads() { return g_default_threads.load(); }

}  // namespace pgsw
