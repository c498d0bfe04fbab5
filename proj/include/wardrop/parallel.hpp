#ifndef WARDROP_PARALLEL_HPP
#define WARDROP_PARALLEL_HPP

#include <functional>

namespace wardrop {

/// Worker cap from WARDROP_SENSE_THREADS; 0 or unset means one per hardware
/// thread. Always at least 1.
int worker_count();

/// Runs fn(0..n-1) on up to worker_count() threads. Tasks must write to
/// disjoint slots; the first exception thrown by any task is rethrown.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace wardrop

#endif
