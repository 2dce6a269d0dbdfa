#include "attrlab/parallel.hpp"

namespace attrlab {

namespace {
std::atomic<int> g_worker_cap{0};
}

void set_worker_cap(int cap) { g_worker_cap.store(cap); }

int default_workers() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    const int cap = g_worker_cap.load();
    if (cap > 0 && cap < hw) return cap;
    return hw;
}

}  // namespace attrlab
