#include "wikibox/ingest/rate_limiter.hpp"

#include <stdexcept>

namespace wikibox::ingest {

RateLimiter::RateLimiter(int max_concurrent, std::chrono::milliseconds min_interval)
    : max_concurrent_(max_concurrent), min_interval_(min_interval) {
  if (max_concurrent < 1) {
    throw std::invalid_argument("RateLimiter: max_concurrent must be >= 1");
  }
  if (min_interval.count() < 0) {
    throw std::invalid_argument("RateLimiter: min_interval must be nonnegative");
  }
}

RateLimiter::Ticket RateLimiter::acquire() {
  std::unique_lock lock(mutex_);
  for (;;) {
    cv_.wait(lock, [&] { return in_flight_ < max_concurrent_; });

    const auto now = std::chrono::steady_clock::now();
    if (!any_started_ || now - last_start_ >= min_interval_) {
      any_started_ = true;
      last_start_ = now;
      ++in_flight_;
      return Ticket(this);
    }
    const auto until = last_start_ + min_interval_;
    cv_.wait_until(lock, until);
  }
}

void RateLimiter::release() {
  {
    std::lock_guard lock(mutex_);
    --in_flight_;
  }
  cv_.notify_all();
}

}  // namespace wikibox::ingest
