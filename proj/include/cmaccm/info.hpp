#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cmaccm/joint_pmf.hpp"
#include "cmaccm/pmf.hpp"

namespace cmaccm {

// All information quantities are in bits (log base 2), with 0*log(0) = 0.

inline double entropy_of_table(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

inline double entropy(const Pmf& p) { return entropy_of_table(p.probs()); }

namespace detail {

// H of the marginal over `labels`, accumulated without building a JointPmf.
inline double subset_entropy(const JointPmf& joint, const std::vector<std::string>& labels) {
    if (labels.empty()) return 0.0;
    std::vector<std::size_t> idx;
    idx.reserve(labels.size());
    for (const auto& l : labels) idx.push_back(joint.index_of(l));

    std::size_t total = 1;
    for (std::size_t i : idx) total *= joint.sizes()[i];
    std::vector<std::size_t> strides(idx.size(), 1);
    for (std::size_t i = idx.size(); i-- > 1;)
        strides[i - 1] = strides[i] * joint.sizes()[idx[i]];

    std::vector<double> marg(total, 0.0);
    const auto& sizes = joint.sizes();
    const auto& probs = joint.probs();
    std::vector<std::size_t> digits(sizes.size(), 0);
    for (std::size_t flat = 0; flat < probs.size(); ++flat) {
        std::size_t out = 0;
        for (std::size_t i = 0; i < idx.size(); ++i) out += digits[idx[i]] * strides[i];
        marg[out] += probs[flat];
        for (std::size_t i = sizes.size(); i-- > 0;) {
            if (++digits[i] < sizes[i]) break;
            digits[i] = 0;
        }
    }
    return entropy_of_table(marg);
}

inline std::vector<std::string> concat(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace detail

// I(A; B | C) between groups of variables, via the entropy decomposition
// H(A,C) + H(B,C) - H(A,B,C) - H(C). Rounding can leave a tiny negative
// residue; mutual information is non-negative, so results are clamped at 0.
inline double group_mutual_information(const JointPmf& joint, const std::vector<std::string>& a,
                                       const std::vector<std::string>& b,
                                       const std::vector<std::string>& c = {}) {
    if (a.empty() || b.empty()) throw UsageError("mutual information: empty variable group");
    std::vector<std::string> all = detail::concat(detail::concat(a, b), c);
    for (std::size_t i = 0; i < all.size(); ++i) {
        joint.index_of(all[i]);  // throws on unknown label
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (all[i] == all[j])
                throw UsageError("mutual information: label '" + all[i] + "' used twice");
    }
    const double h_ac = detail::subset_entropy(joint, detail::concat(a, c));
    const double h_bc = detail::subset_entropy(joint, detail::concat(b, c));
    const double h_abc = detail::subset_entropy(joint, all);
    const double h_c = detail::subset_entropy(joint, c);
    const double value = h_ac + h_bc - h_abc - h_c;
    return value > 0.0 ? value : 0.0;
}

inline double mutual_information(const JointPmf& joint, const std::string& a,
                                 const std::string& b) {
    return group_mutual_information(joint, {a}, {b});
}

inline double conditional_mutual_information(const JointPmf& joint, const std::string& a,
                                             const std::string& b,
                                             const std::vector<std::string>& c) {
    return group_mutual_information(joint, {a}, {b}, c);
}

inline double conditional_mutual_information(const JointPmf& joint, const std::string& a,
                                             const std::string& b, const std::string& c) {
    return group_mutual_information(joint, {a}, {b}, {c});
}

}  // namespace cmaccm
