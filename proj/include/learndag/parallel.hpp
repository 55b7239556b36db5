#ifndef LEARNDAG_PARALLEL_HPP
#define LEARNDAG_PARALLEL_HPP

#include <functional>

namespace learndag {

int resolve_threads(int threads);

// Runs fn(0) .. fn(count-1) across at most `threads` workers (0 = hardware).
// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace learndag

#endif  // LEARNDAG_PARALLEL_HPP
