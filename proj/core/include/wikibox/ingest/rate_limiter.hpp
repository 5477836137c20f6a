#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>

namespace wikibox::ingest {

// Gates request starts: no two admitted starts lie closer than the minimum
// interval, and at most max_concurrent tickets are outstanding. Shared by
// all workers driving one provider instance.
class RateLimiter {
 public:
  RateLimiter(int max_concurrent, std::chrono::milliseconds min_interval);

  class Ticket {
   public:
    explicit Ticket(RateLimiter* limiter) : limiter_(limiter) {}
    Ticket(Ticket&& other) noexcept : limiter_(other.limiter_) { other.limiter_ = nullptr; }
    Ticket(const Ticket&) = delete;
    Ticket& operator=(const Ticket&) = delete;
    Ticket& operator=(Ticket&&) = delete;
    ~Ticket() {
      if (limiter_) limiter_->release();
    }

   private:
    RateLimiter* limiter_;
  };

  // Blocks until both the spacing and the concurrency constraint admit a
  // new request.
  Ticket acquire();

 private:
  void release();

  std::mutex mutex_;
  std::condition_variable cv_;
  int max_concurrent_;
  std::chrono::milliseconds min_interval_;
  int in_flight_ = 0;
  std::chrono::steady_clock::time_point last_start_;
  bool any_started_ = false;
};

}  // namespace wikibox::ingest
