#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cmaccm/errors.hpp"

namespace cmaccm {

// Tolerance for "sums to one" checks on input probability data.
// Renormalization is refused on purpose: off-by-more-than-this input is a
// data error, not noise.
inline constexpr double kProbSumTol = 1e-9;

inline void check_prob_vector(const std::vector<double>& probs, const std::string& what) {
    if (probs.empty()) throw ValidationError(what + ": empty probability vector");
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] >= 0.0) || !std::isfinite(probs[i]))
            throw ValidationError(what + ": entry " + std::to_string(i) + " is negative or non-finite");
        sum += probs[i];
    }
    if (std::abs(sum - 1.0) > kProbSumTol)
        throw ValidationError(what + ": probabilities sum to " + std::to_string(sum) +
                              ", expected 1 within 1e-9");
}

// A pmf over {0, ..., support_size-1}. Immutable after construction.
class Pmf {
   public:
    explicit Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
        check_prob_vector(probs_, "Pmf");
    }

    static Pmf degenerate(std::size_t support_size, std::size_t atom) {
        if (atom >= support_size) throw UsageError("Pmf::degenerate: atom out of range");
        std::vector<double> p(support_size, 0.0);
        p[atom] = 1.0;
        return Pmf(std::move(p));
    }

    static Pmf uniform(std::size_t support_size) {
        if (support_size == 0) throw UsageError("Pmf::uniform: empty support");
        return Pmf(std::vector<double>(support_size, 1.0 / static_cast<double>(support_size)));
    }

    std::size_t support_size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

   private:
    std::vector<double> probs_;
};

// One pmf row per conditioning value.
class ConditionalPmf {
   public:
    explicit ConditionalPmf(std::vector<Pmf> rows) : rows_(std::move(rows)) {
        if (rows_.empty()) throw ValidationError("ConditionalPmf: no rows");
        for (const auto& r : rows_)
            if (r.support_size() != rows_.front().support_size())
                throw ValidationError("ConditionalPmf: rows have mismatched support sizes");
    }

    static ConditionalPmf identity(std::size_t size) {
        std::vector<Pmf> rows;
        rows.reserve(size);
        for (std::size_t i = 0; i < size; ++i) rows.push_back(Pmf::degenerate(size, i));
        return ConditionalPmf(std::move(rows));
    }

    std::size_t given_size() const { return rows_.size(); }
    std::size_t out_size() const { return rows_.front().support_size(); }
    const Pmf& row(std::size_t g) const {
        if (g >= rows_.size()) throw UsageError("ConditionalPmf: conditioning value out of range");
        return rows_[g];
    }
    double prob(std::size_t g, std::size_t x) const { return row(g)[x]; }

   private:
    std::vector<Pmf> rows_;
};

}  // namespace cmaccm
