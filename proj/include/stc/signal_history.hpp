#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "stc/errors.hpp"

namespace stc {

// Ring buffer over the most recent samples of a scalar signal.
// Index 0 is the newest sample, index k the sample k steps in the past.
// Slots that have never been written read as zero, so a fresh history
// behaves like a signal that was identically zero before time began.
class SignalHistory {
public:
    explicit SignalHistory(std::size_t capacity) : buf_(capacity, 0.0) {
        if (capacity == 0) throw ConfigError("SignalHistory capacity must be positive");
    }

    void push(double x) {
        head_ = (head_ == 0 ? buf_.size() : head_) - 1;
        buf_[head_] = x;
    }

    [[nodiscard]] double operator[](std::size_t k) const {
        return buf_[(head_ + k) % buf_.size()];
    }

    [[nodiscard]] std::size_t capacity() const noexcept { return buf_.size(); }

    // Overwrites the whole buffer, as if the signal had been constant forever.
    void fill(double x) { std::fill(buf_.begin(), buf_.end(), x); }

private:
    std::vector<double> buf_;
    std::size_t head_ = 0;
};

} // namespace stc
