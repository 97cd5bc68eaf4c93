#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>

namespace diffspot::net {

// Token bucket shared by all workers hitting one endpoint. acquire() blocks
// until a token is available; refill is continuous at `refill_per_sec`.
class TokenBucket {
public:
    TokenBucket(double capacity, double refill_per_sec)
        : capacity_(capacity),
          refill_per_sec_(refill_per_sec),
          tokens_(capacity),
          last_refill_(clock::now()) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        refill_locked();
        while (tokens_ < 1.0) {
            const double deficit = 1.0 - tokens_;
            const auto wait = std::chrono::duration<double>(deficit / refill_per_sec_);
            cv_.wait_for(lock, wait);
            refill_locked();
        }
        tokens_ -= 1.0;
    }

private:
    using clock = std::chrono::steady_clock;

    void refill_locked() {
        const auto now = clock::now();
        const double elapsed = std::chrono::duration<double>(now - last_refill_).count();
        tokens_ = std::min(capacity_, tokens_ + elapsed * refill_per_sec_);
        last_refill_ = now;
    }

    double capacity_;
    double refill_per_sec_;
    double tokens_;
    clock::time_point last_refill_;
    std::mutex mutex_;
    std::condition_variable cv_;
};

}  // namespace diffspot::net
