#pragma once

#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace logpot {

/// Raised for every violated precondition or failed numerical routine in the
/// library. The message is the contract; callers and tests match on it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Worker count for parallel loops: LOGPOT_THREADS if set and positive,
/// otherwise the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous chunks, one per
/// worker; body must only write state owned by index i. The first exception
/// thrown by any worker is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace logpot
