#pragma once

#include <cstdint>
#include <functional>

namespace ecdflab {

// Runs body(i) for every i in [0, count), split over up to `threads`
// workers. body(i) may touch only state owned by index i, so results are
// identical for every thread count.
void parallel_for(std::int64_t count, unsigned threads, const std::function<void(std::int64_t)>& body);

}  // namespace ecdflab
