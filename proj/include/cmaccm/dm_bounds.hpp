#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cmaccm/aux_law.hpp"
#include "cmaccm/channel.hpp"
#include "cmaccm/info.hpp"
#include "cmaccm/region.hpp"
#include "cmaccm/rng.hpp"
#include "cmaccm/simplex_grid.hpp"

namespace cmaccm {

// Strict-violation threshold for the less-noisy counterexample search.
inline constexpr double kLessNoisyTol = 1e-9;

struct SweepConfig {
    std::size_t u_size = 2;
    std::size_t v1_size = 2;
    std::size_t v2_size = 2;
    std::size_t grid_k = 2;              // probabilities on multiples of 1/k
    std::size_t random_samples = 0;      // extra Dirichlet-uniform draws
    std::optional<std::uint64_t> seed;   // required when random_samples > 0
    std::uint64_t budget = 5'000'000;    // cap on law evaluations per sweep

    void validate() const {
        if (grid_k < 1) throw UsageError("SweepConfig: grid denominator must be >= 1");
        if (u_size < 1 || v1_size < 1 || v2_size < 1)
            throw UsageError("SweepConfig: auxiliary alphabet sizes must be >= 1");
        if (random_samples > 0 && !seed)
            throw UsageError("SweepConfig: seed required when random_samples > 0");
    }

    std::string echo() const {
        std::ostringstream os;
        os << "u_size=" << u_size << " v1_size=" << v1_size << " v2_size=" << v2_size
           << " grid_k=" << grid_k << " random_samples=" << random_samples;
        return os.str();
    }
};

// Theorem-2 rate constraints for one auxiliary chain.
inline ConstraintSet inner_constraints(const InnerAuxLaw& aux, const DmChannel& ch) {
    const JointPmf joint = build_inner_law(aux, ch).marginalize({"U", "V1", "X2", "Y1", "Y2"});
    const double i_v1_y1_given_x2u = group_mutual_information(joint, {"V1"}, {"Y1"}, {"X2", "U"});
    const double i_v1_y2_given_x2u = group_mutual_information(joint, {"V1"}, {"Y2"}, {"X2", "U"});
    const double i_x2_y1_given_v1u = group_mutual_information(joint, {"X2"}, {"Y1"}, {"V1", "U"});
    const double i_x2_y2_given_u = group_mutual_information(joint, {"X2"}, {"Y2"}, {"U"});
    const double i_ux2_y2 = group_mutual_information(joint, {"U", "X2"}, {"Y2"});
    const double i_v1x2_y1_given_u = group_mutual_information(joint, {"V1", "X2"}, {"Y1"}, {"U"});
    const double i_v1x2_y1 = group_mutual_information(joint, {"V1", "X2"}, {"Y1"});

    ConstraintSet cs("thm2");
    cs.add({0, 1, 0}, i_v1_y1_given_x2u - i_v1_y2_given_x2u);
    cs.add({0, 0, 1}, std::min(i_x2_y1_given_v1u, i_x2_y2_given_u));
    cs.add({1, 0, 1}, i_ux2_y2);
    cs.add({0, 1, 1}, i_v1x2_y1_given_u - i_v1_y2_given_x2u);
    cs.add({1, 1, 1}, i_v1x2_y1 - i_v1_y2_given_x2u);
    return cs;
}

// Theorem-1 rate constraints for one auxiliary chain.
inline ConstraintSet outer_constraints(const OuterAuxLaw& aux, const DmChannel& ch) {
    const JointPmf joint = build_outer_law(aux, ch).marginalize({"U", "V1", "V2", "Y1", "Y2"});
    const double i_u_y1 = group_mutual_information(joint, {"U"}, {"Y1"});
    const double i_u_y2 = group_mutual_information(joint, {"U"}, {"Y2"});
    const double i_v1_y1_given_uv2 = group_mutual_information(joint, {"V1"}, {"Y1"}, {"U", "V2"});
    const double i_v1_y2_given_uv2 = group_mutual_information(joint, {"V1"}, {"Y2"}, {"U", "V2"});
    const double i_v2_y1 = group_mutual_information(joint, {"V2"}, {"Y1"});
    const double i_v2_y2 = group_mutual_information(joint, {"V2"}, {"Y2"});
    const double i_v1v2_y1 = group_mutual_information(joint, {"V1", "V2"}, {"Y1"});

    ConstraintSet cs("thm1");
    cs.add({1, 0, 0}, std::min(i_u_y1, i_u_y2));
    cs.add({0, 1, 0}, i_v1_y1_given_uv2 - i_v1_y2_given_uv2);
    cs.add({0, 0, 1}, std::min(i_v2_y1, i_v2_y2));
    cs.add({0, 1, 1}, i_v1v2_y1 - i_v1_y2_given_uv2);
    return cs;
}

enum class LessNoisyMode {
    Outer,  // Theorem 3: joint p(v1,v2)
    Inner,  // Theorem 4: independent p(v1)p(v2)
};

// Theorem-3/4 rate constraints. The auxiliary chain carries no common layer,
// so |U| must be 1; inner mode additionally requires V1 and V2 independent.
inline ConstraintSet less_noisy_constraints(const OuterAuxLaw& aux, const DmChannel& ch,
                                            LessNoisyMode mode) {
    if (aux.u_size() != 1)
        throw ValidationError("less_noisy_constraints: auxiliary chain must not carry U (|U| != 1)");
    if (mode == LessNoisyMode::Inner) {
        // Factorization check p(v1,v2) = p(v1)p(v2).
        std::vector<double> pv1(aux.v1_size(), 0.0), pv2(aux.v2_size(), 0.0);
        for (std::size_t v1 = 0; v1 < aux.v1_size(); ++v1)
            for (std::size_t v2 = 0; v2 < aux.v2_size(); ++v2) {
                pv1[v1] += aux.p_v1v2(0, v1, v2);
                pv2[v2] += aux.p_v1v2(0, v1, v2);
            }
        for (std::size_t v1 = 0; v1 < aux.v1_size(); ++v1)
            for (std::size_t v2 = 0; v2 < aux.v2_size(); ++v2)
                if (std::abs(aux.p_v1v2(0, v1, v2) - pv1[v1] * pv2[v2]) > 1e-9)
                    throw ValidationError(
                        "less_noisy_constraints: inner mode requires independent (V1,V2)");
    }
    const JointPmf joint = build_outer_law(aux, ch).marginalize({"V1", "V2", "Y1", "Y2"});
    const double i_v1_y1_given_v2 = group_mutual_information(joint, {"V1"}, {"Y1"}, {"V2"});
    const double i_v1_y2_given_v2 = group_mutual_information(joint, {"V1"}, {"Y2"}, {"V2"});
    const double i_v2_y2 = group_mutual_information(joint, {"V2"}, {"Y2"});
    const double i_v1v2_y1 = group_mutual_information(joint, {"V1", "V2"}, {"Y1"});

    ConstraintSet cs(mode == LessNoisyMode::Outer ? "thm3" : "thm4");
    cs.add({0, 1, 0}, i_v1_y1_given_v2 - i_v1_y2_given_v2);
    cs.add({0, 0, 1}, i_v2_y2);
    cs.add({0, 1, 1}, i_v1v2_y1 - i_v1_y2_given_v2);
    return cs;
}

namespace sweep_detail {

// Enumerates tuples of `rows` grid vectors, one per conditioning value
// (first row outermost).
inline void for_each_row_tuple(const std::vector<std::vector<double>>& grid, std::size_t rows,
                               std::vector<const std::vector<double>*>& current,
                               const std::function<void()>& fn, std::size_t pos = 0) {
    if (pos == rows) {
        fn();
        return;
    }
    for (const auto& g : grid) {
        current[pos] = &g;
        for_each_row_tuple(grid, rows, current, fn, pos + 1);
    }
}

inline ConditionalPmf rows_to_conditional(const std::vector<const std::vector<double>*>& rows) {
    std::vector<Pmf> out;
    out.reserve(rows.size());
    for (const auto* r : rows) out.push_back(Pmf(*r));
    return ConditionalPmf(std::move(out));
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
}

inline std::uint64_t pow_count(std::uint64_t base, std::size_t exp) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

}  // namespace sweep_detail

// Grid sweep over Theorem-2 auxiliary chains; returns the union of the
// per-law vertex sets.
inline RegionCloud sweep_inner(const DmChannel& ch, const SweepConfig& cfg) {
    cfg.validate();
    using namespace sweep_detail;
    const std::uint64_t n_u = simplex_grid_count(cfg.u_size, cfg.grid_k);
    const std::uint64_t n_v1row = simplex_grid_count(cfg.v1_size, cfg.grid_k);
    const std::uint64_t n_x1row = simplex_grid_count(ch.x1_size(), cfg.grid_k);
    const std::uint64_t n_x2row = simplex_grid_count(ch.x2_size(), cfg.grid_k);
    std::uint64_t law_count = checked_mul(n_u, pow_count(n_v1row, cfg.u_size));
    law_count = checked_mul(law_count, pow_count(n_x1row, cfg.v1_size));
    law_count = checked_mul(law_count, pow_count(n_x2row, cfg.u_size));
    law_count += cfg.random_samples;
    if (law_count > cfg.budget)
        throw BudgetError("sweep_inner: " + std::to_string(law_count) +
                          " law evaluations exceed budget " + std::to_string(cfg.budget));

    const auto grid_u = simplex_grid_points(cfg.u_size, cfg.grid_k);
    const auto grid_v1 = simplex_grid_points(cfg.v1_size, cfg.grid_k);
    const auto grid_x1 = simplex_grid_points(ch.x1_size(), cfg.grid_k);
    const auto grid_x2 = simplex_grid_points(ch.x2_size(), cfg.grid_k);

    std::vector<RateTuple> points;
    auto eval = [&](const InnerAuxLaw& law) {
        for (const auto& v : vertices_of(inner_constraints(law, ch))) points.push_back(v);
    };

    std::vector<const std::vector<double>*> rows_v1(cfg.u_size), rows_x1(cfg.v1_size),
        rows_x2(cfg.u_size);
    for (const auto& pu : grid_u) {
        for_each_row_tuple(grid_v1, cfg.u_size, rows_v1, [&] {
            for_each_row_tuple(grid_x1, cfg.v1_size, rows_x1, [&] {
                for_each_row_tuple(grid_x2, cfg.u_size, rows_x2, [&] {
                    InnerAuxLaw law{Pmf(pu), rows_to_conditional(rows_v1),
                                    rows_to_conditional(rows_x1), rows_to_conditional(rows_x2)};
                    eval(law);
                });
            });
        });
    }
    for (std::size_t i = 0; i < cfg.random_samples; ++i) {
        Rng rng = derived_rng(*cfg.seed, 1, i);
        auto cond = [&](std::size_t rows, std::size_t dim) {
            std::vector<Pmf> rs;
            rs.reserve(rows);
            for (std::size_t r = 0; r < rows; ++r) rs.push_back(Pmf(rng.dirichlet_uniform(dim)));
            return ConditionalPmf(std::move(rs));
        };
        InnerAuxLaw law{Pmf(rng.dirichlet_uniform(cfg.u_size)), cond(cfg.u_size, cfg.v1_size),
                        cond(cfg.v1_size, ch.x1_size()), cond(cfg.u_size, ch.x2_size())};
        eval(law);
    }

    RegionCloud cloud;
    cloud.points = std::move(points);
    finalize_points(cloud.points);
    cloud.meta.provenance = "thm2";
    cloud.meta.config = cfg.echo();
    cloud.meta.seed = cfg.seed;
    return cloud;
}

// Grid sweep over Eq.-style outer auxiliary chains. A finite family stands in
// for the full union, so the result under-approximates the true outer bound;
// the meta note keeps that caveat attached to the data.
inline RegionCloud sweep_outer(const DmChannel& ch, const SweepConfig& cfg) {
    cfg.validate();
    using namespace sweep_detail;
    const std::size_t v1v2 = cfg.v1_size * cfg.v2_size;
    const std::uint64_t n_u = simplex_grid_count(cfg.u_size, cfg.grid_k);
    const std::uint64_t n_vrow = simplex_grid_count(v1v2, cfg.grid_k);
    const std::uint64_t n_x1row = simplex_grid_count(ch.x1_size(), cfg.grid_k);
    const std::uint64_t n_x2row = simplex_grid_count(ch.x2_size(), cfg.grid_k);
    std::uint64_t law_count = checked_mul(n_u, pow_count(n_vrow, cfg.u_size));
    law_count = checked_mul(law_count, pow_count(n_x1row, cfg.v1_size));
    law_count = checked_mul(law_count, pow_count(n_x2row, cfg.v2_size));
    law_count += cfg.random_samples;
    if (law_count > cfg.budget)
        throw BudgetError("sweep_outer: " + std::to_string(law_count) +
                          " law evaluations exceed budget " + std::to_string(cfg.budget));

    const auto grid_u = simplex_grid_points(cfg.u_size, cfg.grid_k);
    const auto grid_v = simplex_grid_points(v1v2, cfg.grid_k);
    const auto grid_x1 = simplex_grid_points(ch.x1_size(), cfg.grid_k);
    const auto grid_x2 = simplex_grid_points(ch.x2_size(), cfg.grid_k);

    std::vector<RateTuple> points;
    auto eval = [&](const OuterAuxLaw& law) {
        for (const auto& v : vertices_of(outer_constraints(law, ch))) points.push_back(v);
    };

    std::vector<const std::vector<double>*> rows_v(cfg.u_size), rows_x1(cfg.v1_size),
        rows_x2(cfg.v2_size);
    for (const auto& pu : grid_u) {
        for_each_row_tuple(grid_v, cfg.u_size, rows_v, [&] {
            for_each_row_tuple(grid_x1, cfg.v1_size, rows_x1, [&] {
                for_each_row_tuple(grid_x2, cfg.v2_size, rows_x2, [&] {
                    OuterAuxLaw law{Pmf(pu),
                                    cfg.v1_size,
                                    cfg.v2_size,
                                    rows_to_conditional(rows_v),
                                    rows_to_conditional(rows_x1),
                                    rows_to_conditional(rows_x2)};
                    eval(law);
                });
            });
        });
    }
    for (std::size_t i = 0; i < cfg.random_samples; ++i) {
        Rng rng = derived_rng(*cfg.seed, 2, i);
        auto cond = [&](std::size_t rows, std::size_t dim) {
            std::vector<Pmf> rs;
            rs.reserve(rows);
            for (std::size_t r = 0; r < rows; ++r) rs.push_back(Pmf(rng.dirichlet_uniform(dim)));
            return ConditionalPmf(std::move(rs));
        };
        OuterAuxLaw law{Pmf(rng.dirichlet_uniform(cfg.u_size)),
                        cfg.v1_size,
                        cfg.v2_size,
                        cond(cfg.u_size, v1v2),
                        cond(cfg.v1_size, ch.x1_size()),
                        cond(cfg.v2_size, ch.x2_size())};
        eval(law);
    }

    RegionCloud cloud;
    cloud.points = std::move(points);
    finalize_points(cloud.points);
    cloud.meta.provenance = "thm1";
    cloud.meta.config = cfg.echo();
    cloud.meta.note = "sampled outer region - under-approximation of the true outer bound";
    cloud.meta.seed = cfg.seed;
    return cloud;
}

// Grid sweep for the less-noisy bounds (Theorems 3 and 4). U is absent; the
// v2 role is played by the auxiliary fed through p(x2|v2).
inline RegionCloud sweep_less_noisy(const DmChannel& ch, const SweepConfig& cfg,
                                    LessNoisyMode mode) {
    cfg.validate();
    using namespace sweep_detail;
    const std::size_t v1v2 = cfg.v1_size * cfg.v2_size;
    const std::uint64_t n_joint = mode == LessNoisyMode::Outer
                                      ? simplex_grid_count(v1v2, cfg.grid_k)
                                      : checked_mul(simplex_grid_count(cfg.v1_size, cfg.grid_k),
                                                    simplex_grid_count(cfg.v2_size, cfg.grid_k));
    const std::uint64_t n_x1row = simplex_grid_count(ch.x1_size(), cfg.grid_k);
    const std::uint64_t n_x2row = simplex_grid_count(ch.x2_size(), cfg.grid_k);
    std::uint64_t law_count = checked_mul(n_joint, pow_count(n_x1row, cfg.v1_size));
    law_count = checked_mul(law_count, pow_count(n_x2row, cfg.v2_size));
    law_count += cfg.random_samples;
    if (law_count > cfg.budget)
        throw BudgetError("sweep_less_noisy: " + std::to_string(law_count) +
                          " law evaluations exceed budget " + std::to_string(cfg.budget));

    const auto grid_x1 = simplex_grid_points(ch.x1_size(), cfg.grid_k);
    const auto grid_x2 = simplex_grid_points(ch.x2_size(), cfg.grid_k);

    std::vector<RateTuple> points;
    auto eval = [&](const std::vector<double>& pv) {
        std::vector<const std::vector<double>*> rows_x1(cfg.v1_size), rows_x2(cfg.v2_size);
        for_each_row_tuple(grid_x1, cfg.v1_size, rows_x1, [&] {
            for_each_row_tuple(grid_x2, cfg.v2_size, rows_x2, [&] {
                OuterAuxLaw law{Pmf({1.0}),
                                cfg.v1_size,
                                cfg.v2_size,
                                ConditionalPmf({Pmf(pv)}),
                                rows_to_conditional(rows_x1),
                                rows_to_conditional(rows_x2)};
                for (const auto& v : vertices_of(less_noisy_constraints(law, ch, mode)))
                    points.push_back(v);
            });
        });
    };

    if (mode == LessNoisyMode::Outer) {
        for_each_simplex_grid_point(v1v2, cfg.grid_k, eval);
    } else {
        for_each_simplex_grid_point(cfg.v1_size, cfg.grid_k, [&](const std::vector<double>& p1) {
            for_each_simplex_grid_point(cfg.v2_size, cfg.grid_k,
                                        [&](const std::vector<double>& p2) {
                                            std::vector<double> pv(v1v2);
                                            for (std::size_t v2 = 0; v2 < cfg.v2_size; ++v2)
                                                for (std::size_t v1 = 0; v1 < cfg.v1_size; ++v1)
                                                    pv[v2 * cfg.v1_size + v1] = p1[v1] * p2[v2];
                                            eval(pv);
                                        });
        });
    }
    for (std::size_t i = 0; i < cfg.random_samples; ++i) {
        Rng rng = derived_rng(*cfg.seed, 3, i);
        std::vector<double> pv;
        if (mode == LessNoisyMode::Outer) {
            pv = rng.dirichlet_uniform(v1v2);
        } else {
            auto p1 = rng.dirichlet_uniform(cfg.v1_size);
            auto p2 = rng.dirichlet_uniform(cfg.v2_size);
            pv.resize(v1v2);
            for (std::size_t v2 = 0; v2 < cfg.v2_size; ++v2)
                for (std::size_t v1 = 0; v1 < cfg.v1_size; ++v1)
                    pv[v2 * cfg.v1_size + v1] = p1[v1] * p2[v2];
        }
        eval(pv);
    }

    RegionCloud cloud;
    cloud.points = std::move(points);
    finalize_points(cloud.points);
    cloud.meta.provenance = mode == LessNoisyMode::Outer ? "thm3" : "thm4";
    cloud.meta.config = cfg.echo();
    cloud.meta.seed = cfg.seed;
    if (mode == LessNoisyMode::Outer)
        cloud.meta.note = "sampled outer region - under-approximation of the true outer bound";
    return cloud;
}

struct LessNoisyVerdict {
    enum class Status { CounterexampleFound, NoCounterexampleAtResolution };

    struct Witness {
        std::vector<std::vector<double>> p_v2_x2;  // [v2][x2]
        double i_v2_y1 = 0.0;
        double i_v2_y2 = 0.0;
    };

    Status status = Status::NoCounterexampleAtResolution;
    std::optional<Witness> witness;
    // Resolution record.
    std::size_t v2_size = 0;
    std::size_t grid_k = 0;
    std::uint64_t laws_checked = 0;
    std::size_t random_samples = 0;
    std::optional<std::uint64_t> seed;
    std::vector<double> p_x1;
};

namespace detail {

// Joint p(v2, y1, y2) for a coupling p(v2,x2), with X1 drawn i.i.d. from
// p_x1 independently of (V2, X2).
inline JointPmf less_noisy_joint(const DmChannel& ch, const Pmf& p_x1,
                                 const std::vector<double>& p_v2x2, std::size_t v2_size) {
    const std::size_t nx2 = ch.x2_size(), ny1 = ch.y1_size(), ny2 = ch.y2_size();
    std::vector<double> table(v2_size * ny1 * ny2, 0.0);
    for (std::size_t v2 = 0; v2 < v2_size; ++v2)
        for (std::size_t x2 = 0; x2 < nx2; ++x2) {
            const double pvx = p_v2x2[v2 * nx2 + x2];
            if (pvx == 0.0) continue;
            for (std::size_t x1 = 0; x1 < ch.x1_size(); ++x1) {
                const double w = pvx * p_x1[x1];
                if (w == 0.0) continue;
                for (std::size_t y1 = 0; y1 < ny1; ++y1)
                    for (std::size_t y2 = 0; y2 < ny2; ++y2)
                        table[(v2 * ny1 + y1) * ny2 + y2] += w * ch.prob(x1, x2, y1, y2);
            }
        }
    return JointPmf({"V2", "Y1", "Y2"}, {v2_size, ny1, ny2}, std::move(table));
}

}  // namespace detail

// Falsification scan for the less-noisy property: searches couplings
// p(v2,x2) for a strict violation of I(V2;Y1) >= I(V2;Y2). Never claims a
// proof; a clean pass only certifies the scanned resolution.
inline LessNoisyVerdict less_noisy_test(const DmChannel& ch, const Pmf& p_x1, std::size_t v2_size,
                                        const SweepConfig& cfg) {
    if (v2_size < 1) throw UsageError("less_noisy_test: v2_size must be >= 1");
    if (p_x1.support_size() != ch.x1_size())
        throw ValidationError("less_noisy_test: p_x1 support does not match channel x1_size");
    if (cfg.random_samples > 0 && !cfg.seed)
        throw UsageError("less_noisy_test: seed required when random_samples > 0");

    LessNoisyVerdict verdict;
    verdict.v2_size = v2_size;
    verdict.grid_k = cfg.grid_k;
    verdict.random_samples = cfg.random_samples;
    verdict.seed = cfg.seed;
    verdict.p_x1 = p_x1.probs();

    const std::size_t dim = v2_size * ch.x2_size();
    const std::uint64_t total = simplex_grid_count(dim, cfg.grid_k) + cfg.random_samples;
    if (total > cfg.budget)
        throw BudgetError("less_noisy_test: " + std::to_string(total) +
                          " couplings exceed budget " + std::to_string(cfg.budget));

    bool found = false;
    auto check = [&](const std::vector<double>& p_v2x2) {
        if (found) return;
        ++verdict.laws_checked;
        const JointPmf joint = detail::less_noisy_joint(ch, p_x1, p_v2x2, v2_size);
        const double i1 = mutual_information(joint, "V2", "Y1");
        const double i2 = mutual_information(joint, "V2", "Y2");
        if (i1 < i2 - kLessNoisyTol) {
            found = true;
            LessNoisyVerdict::Witness w;
            w.p_v2_x2.assign(v2_size, std::vector<double>(ch.x2_size()));
            for (std::size_t v2 = 0; v2 < v2_size; ++v2)
                for (std::size_t x2 = 0; x2 < ch.x2_size(); ++x2)
                    w.p_v2_x2[v2][x2] = p_v2x2[v2 * ch.x2_size() + x2];
            w.i_v2_y1 = i1;
            w.i_v2_y2 = i2;
            verdict.witness = std::move(w);
            verdict.status = LessNoisyVerdict::Status::CounterexampleFound;
        }
    };

    for_each_simplex_grid_point(dim, cfg.grid_k, check);
    for (std::size_t i = 0; i < cfg.random_samples && !found; ++i) {
        Rng rng = derived_rng(*cfg.seed, 4, i);
        check(rng.dirichlet_uniform(dim));
    }
    return verdict;
}

}  // namespace cmaccm
