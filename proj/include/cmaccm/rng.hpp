#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

#include "cmaccm/errors.hpp"

namespace cmaccm {

// SplitMix64. Self-contained so that seeded runs are byte-identical across
// standard library implementations (std::discrete_distribution is not).
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in {0, ..., n-1}.
    std::size_t next_index(std::size_t n) {
        if (n == 0) throw UsageError("Rng::next_index: empty range");
        return static_cast<std::size_t>(next_double() * static_cast<double>(n)) % n;
    }

    // Inverse-CDF draw from a probability vector (assumed normalized).
    std::size_t sample(const std::vector<double>& probs) {
        double u = next_double();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) return i;
        }
        return probs.empty() ? 0 : probs.size() - 1;
    }

    // Uniform draw from the probability simplex (Dirichlet(1,...,1)) via
    // normalized exponentials.
    std::vector<double> dirichlet_uniform(std::size_t dim) {
        std::vector<double> v(dim);
        double sum = 0.0;
        for (auto& x : v) {
            double u = next_double();
            if (u <= 0.0) u = 0x1.0p-53;
            x = -std::log(u);
            sum += x;
        }
        for (auto& x : v) x /= sum;
        return v;
    }

   private:
    std::uint64_t state_;
};

// Deterministic derivation of a per-item generator from (master seed, index),
// independent of evaluation order or parallel schedule.
inline Rng derived_rng(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t index = 0) {
    Rng mix(master_seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    std::uint64_t a = mix.next_u64();
    Rng mix2(a ^ (0xda942042e4dd58b5ULL * (index + 1)));
    return Rng(mix2.next_u64());
}

}  // namespace cmaccm
