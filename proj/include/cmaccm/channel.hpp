#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cmaccm/errors.hpp"
#include "cmaccm/pmf.hpp"

namespace cmaccm {

// Discrete memoryless two-input two-output channel p(y1,y2|x1,x2).
// Law is stored flat, indexed [x1][x2][y1][y2] with y2 fastest.
class DmChannel {
   public:
    DmChannel(std::size_t x1_size, std::size_t x2_size, std::size_t y1_size, std::size_t y2_size,
              std::vector<double> law)
        : x1_size_(x1_size),
          x2_size_(x2_size),
          y1_size_(y1_size),
          y2_size_(y2_size),
          law_(std::move(law)) {
        if (x1_size_ == 0 || x2_size_ == 0 || y1_size_ == 0 || y2_size_ == 0)
            throw ValidationError("DmChannel: zero-size alphabet");
        if (law_.size() != x1_size_ * x2_size_ * y1_size_ * y2_size_)
            throw ValidationError("DmChannel: law table length does not match alphabet sizes");
        for (std::size_t x1 = 0; x1 < x1_size_; ++x1)
            for (std::size_t x2 = 0; x2 < x2_size_; ++x2) {
                double sum = 0.0;
                for (std::size_t y1 = 0; y1 < y1_size_; ++y1)
                    for (std::size_t y2 = 0; y2 < y2_size_; ++y2) {
                        double p = prob(x1, x2, y1, y2);
                        if (!(p >= 0.0) || !std::isfinite(p))
                            throw ValidationError("DmChannel: negative or non-finite entry at (x1=" +
                                                  std::to_string(x1) + ", x2=" + std::to_string(x2) +
                                                  ")");
                        sum += p;
                    }
                if (std::abs(sum - 1.0) > kProbSumTol)
                    throw ValidationError("DmChannel: output slice at (x1=" + std::to_string(x1) +
                                          ", x2=" + std::to_string(x2) + ") sums to " +
                                          std::to_string(sum) + ", expected 1 within 1e-9");
            }
    }

    std::size_t x1_size() const { return x1_size_; }
    std::size_t x2_size() const { return x2_size_; }
    std::size_t y1_size() const { return y1_size_; }
    std::size_t y2_size() const { return y2_size_; }
    const std::vector<double>& law() const { return law_; }

    double prob(std::size_t x1, std::size_t x2, std::size_t y1, std::size_t y2) const {
        return law_[((x1 * x2_size_ + x2) * y1_size_ + y1) * y2_size_ + y2];
    }

    double prob_y1(std::size_t x1, std::size_t x2, std::size_t y1) const {
        double s = 0.0;
        for (std::size_t y2 = 0; y2 < y2_size_; ++y2) s += prob(x1, x2, y1, y2);
        return s;
    }

    double prob_y2(std::size_t x1, std::size_t x2, std::size_t y2) const {
        double s = 0.0;
        for (std::size_t y1 = 0; y1 < y1_size_; ++y1) s += prob(x1, x2, y1, y2);
        return s;
    }

   private:
    std::size_t x1_size_, x2_size_, y1_size_, y2_size_;
    std::vector<double> law_;
};

}  // namespace cmaccm
