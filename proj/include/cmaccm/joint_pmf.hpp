#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cmaccm/errors.hpp"
#include "cmaccm/pmf.hpp"

namespace cmaccm {

// A normalized pmf over a named tuple of finite variables. The flat table is
// row-major with the LAST variable varying fastest. Immutable after
// construction.
class JointPmf {
   public:
    JointPmf(std::vector<std::string> var_names, std::vector<std::size_t> sizes,
             std::vector<double> probs)
        : names_(std::move(var_names)), sizes_(std::move(sizes)), probs_(std::move(probs)) {
        if (names_.size() != sizes_.size())
            throw ValidationError("JointPmf: var_names/sizes length mismatch");
        if (names_.empty()) throw ValidationError("JointPmf: no variables");
        std::size_t total = 1;
        for (std::size_t s : sizes_) {
            if (s == 0) throw ValidationError("JointPmf: zero-size alphabet");
            total *= s;
        }
        if (total != probs_.size())
            throw ValidationError("JointPmf: table length " + std::to_string(probs_.size()) +
                                  " does not match product of sizes " + std::to_string(total));
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j])
                    throw ValidationError("JointPmf: duplicate variable label '" + names_[i] + "'");
        check_prob_vector(probs_, "JointPmf");
        strides_.assign(sizes_.size(), 1);
        for (std::size_t i = sizes_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * sizes_[i];
    }

    std::size_t var_count() const { return names_.size(); }
    const std::vector<std::string>& var_names() const { return names_; }
    const std::vector<std::size_t>& sizes() const { return sizes_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t table_size() const { return probs_.size(); }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        throw UsageError("JointPmf: unknown variable label '" + name + "'");
    }

    std::size_t size_of(const std::string& name) const { return sizes_[index_of(name)]; }

    double prob(const std::vector<std::size_t>& assignment) const {
        if (assignment.size() != names_.size())
            throw UsageError("JointPmf::prob: assignment arity mismatch");
        std::size_t flat = 0;
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (assignment[i] >= sizes_[i]) throw UsageError("JointPmf::prob: value out of range");
            flat += assignment[i] * strides_[i];
        }
        return probs_[flat];
    }

    // Sums out all variables not in `keep`. Keeps the requested order.
    JointPmf marginalize(const std::vector<std::string>& keep) const {
        if (keep.empty()) throw UsageError("JointPmf::marginalize: empty keep list");
        std::vector<std::size_t> keep_idx;
        keep_idx.reserve(keep.size());
        for (const auto& name : keep) keep_idx.push_back(index_of(name));
        for (std::size_t i = 0; i < keep_idx.size(); ++i)
            for (std::size_t j = i + 1; j < keep_idx.size(); ++j)
                if (keep_idx[i] == keep_idx[j])
                    throw UsageError("JointPmf::marginalize: duplicate label '" + keep[i] + "'");

        std::vector<std::size_t> out_sizes;
        out_sizes.reserve(keep_idx.size());
        std::size_t out_total = 1;
        for (std::size_t idx : keep_idx) {
            out_sizes.push_back(sizes_[idx]);
            out_total *= sizes_[idx];
        }

        std::vector<std::size_t> out_strides(keep_idx.size(), 1);
        for (std::size_t i = keep_idx.size(); i-- > 1;)
            out_strides[i - 1] = out_strides[i] * out_sizes[i];

        std::vector<double> out(out_total, 0.0);
        std::vector<std::size_t> digits(names_.size(), 0);
        for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
            std::size_t out_flat = 0;
            for (std::size_t i = 0; i < keep_idx.size(); ++i)
                out_flat += digits[keep_idx[i]] * out_strides[i];
            out[out_flat] += probs_[flat];
            // Increment mixed-radix counter (last digit fastest).
            for (std::size_t i = names_.size(); i-- > 0;) {
                if (++digits[i] < sizes_[i]) break;
                digits[i] = 0;
            }
        }
        return JointPmf(keep, std::move(out_sizes), std::move(out));
    }

    // Raw table access for hot loops: flat index arithmetic mirrors strides().
    const std::vector<std::size_t>& strides() const { return strides_; }

   private:
    std::vector<std::string> names_;
    std::vector<std::size_t> sizes_;
    std::vector<double> probs_;
    std::vector<std::size_t> strides_;
};

}  // namespace cmaccm
