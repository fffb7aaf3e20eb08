#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cmaccm/errors.hpp"
#include "cmaccm/region.hpp"

namespace cmaccm {

// Gains and power budgets of the two-transmitter Gaussian channel
//   Y1 = sqrt(h1) X1 + sqrt(h2) X2 + N1
//   Y2 = sqrt(g1) X1 + sqrt(g2) X2 + N2
// with unit-variance real noise per receiver.
struct GaussianParams {
    double h1 = 0.0, h2 = 0.0, g1 = 0.0, g2 = 0.0;
    double p1 = 0.0, p2 = 0.0;

    void validate() const {
        for (double v : {h1, h2, g1, g2, p1, p2})
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ValidationError("GaussianParams: all gains and powers must be finite and >= 0");
    }

    std::string echo() const {
        std::ostringstream os;
        os << "h1=" << h1 << " h2=" << h2 << " g1=" << g1 << " g2=" << g2 << " p1=" << p1
           << " p2=" << p2;
        return os.str();
    }
};

// Power allocation between the common (coherently combined) layer and the
// private layer at each transmitter: P1 = P_U1 + P_U', P2 = P_U2 + P_U''.
struct PowerSplit {
    double p_u1 = 0.0, p_uprime = 0.0;
    double p_u2 = 0.0, p_udprime = 0.0;

    void validate(const GaussianParams& gp) const {
        for (double v : {p_u1, p_uprime, p_u2, p_udprime})
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ValidationError("PowerSplit: allocations must be finite and >= 0");
        if (p_u1 + p_uprime > gp.p1 + 1e-12)
            throw ValidationError("PowerSplit: P_U1 + P_U' exceeds P1");
        if (p_u2 + p_udprime > gp.p2 + 1e-12)
            throw ValidationError("PowerSplit: P_U2 + P_U'' exceeds P2");
    }
};

// Gaussian rate function in bits: C(x) = (1/2) log2(1 + x).
inline double c_fn(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("c_fn: argument must be >= 0");
    return 0.5 * std::log2(1.0 + x);
}

// Theorem-5 constraints (secrecy inner bound) at one power split.
inline ConstraintSet cmaccm_inner_constraints(const GaussianParams& gp, const PowerSplit& ps) {
    gp.validate();
    ps.validate(gp);
    const double coh_g = gp.g1 * ps.p_u1 + gp.g2 * gp.p2 +
                         2.0 * std::sqrt(gp.g1 * gp.g2 * ps.p_u1 * ps.p_u2);
    const double coh_h = gp.h1 * gp.p1 + gp.h2 * gp.p2 +
                         2.0 * std::sqrt(gp.h1 * gp.h2 * ps.p_u1 * ps.p_u2);
    const double eaves_private = c_fn(gp.g1 * ps.p_uprime);

    ConstraintSet cs("thm5");
    cs.add({0, 1, 0}, c_fn(gp.h1 * ps.p_uprime) - eaves_private);
    cs.add({0, 0, 1}, std::min(c_fn(gp.h2 * ps.p_udprime),
                               c_fn(gp.g2 * ps.p_udprime / (1.0 + gp.g1 * ps.p_uprime))));
    cs.add({1, 0, 1}, c_fn(coh_g / (1.0 + gp.g1 * ps.p_uprime)));
    cs.add({0, 1, 1}, c_fn(gp.h1 * ps.p_uprime + gp.h2 * ps.p_udprime) - eaves_private);
    cs.add({1, 1, 1}, c_fn(coh_h) - eaves_private);
    return cs;
}

// Theorem-6 constraints (compound MAC capacity, no secrecy) at one split.
// There is no standalone R0 row; R0 is limited through the sum rate only.
inline ConstraintSet compound_capacity_constraints(const GaussianParams& gp,
                                                   const PowerSplit& ps) {
    gp.validate();
    ps.validate(gp);
    const double coh_h = gp.h1 * gp.p1 + gp.h2 * gp.p2 +
                         2.0 * std::sqrt(gp.h1 * gp.h2 * ps.p_u1 * ps.p_u2);
    const double coh_g = gp.g1 * gp.p1 + gp.g2 * gp.p2 +
                         2.0 * std::sqrt(gp.g1 * gp.g2 * ps.p_u1 * ps.p_u2);

    ConstraintSet cs("thm6");
    cs.add({0, 1, 0}, std::min(c_fn(gp.h1 * ps.p_uprime), c_fn(gp.g1 * ps.p_uprime)));
    cs.add({0, 0, 1}, std::min(c_fn(gp.h2 * ps.p_udprime), c_fn(gp.g2 * ps.p_udprime)));
    cs.add({0, 1, 1}, std::min(c_fn(gp.h1 * ps.p_uprime + gp.h2 * ps.p_udprime),
                               c_fn(gp.g1 * ps.p_uprime + gp.g2 * ps.p_udprime)));
    cs.add({1, 1, 1}, std::min(c_fn(coh_h), c_fn(coh_g)));
    return cs;
}

enum class GaussianMode { CmacCmInner, CompoundCapacity };

inline std::string to_string(GaussianMode m) {
    return m == GaussianMode::CmacCmInner ? "cmaccm" : "compound";
}

struct GaussianSweepConfig {
    std::size_t steps = 21;  // grid points per split axis, boundaries included
    GaussianMode mode = GaussianMode::CmacCmInner;

    void validate() const {
        if (steps < 2) throw UsageError("GaussianSweepConfig: steps must be >= 2");
    }
};

// Sweeps both power splits over {(a,b) : a,b >= 0, a+b <= P} grids and
// collects the vertex sets of the per-split constraint polytopes.
inline RegionCloud sweep_gaussian(const GaussianParams& gp, const GaussianSweepConfig& cfg) {
    gp.validate();
    cfg.validate();

    auto axis_grid = [&](double budget) {
        std::vector<double> g;
        g.reserve(cfg.steps);
        if (budget <= 0.0) {
            g.push_back(0.0);
            return g;
        }
        for (std::size_t i = 0; i < cfg.steps; ++i)
            g.push_back(budget * static_cast<double>(i) / static_cast<double>(cfg.steps - 1));
        return g;
    };
    const auto g1grid = axis_grid(gp.p1);
    const auto g2grid = axis_grid(gp.p2);

    std::vector<RateTuple> points;
    for (double a1 : g1grid)
        for (double b1 : g1grid) {
            if (a1 + b1 > gp.p1 + 1e-12) continue;
            for (double a2 : g2grid)
                for (double b2 : g2grid) {
                    if (a2 + b2 > gp.p2 + 1e-12) continue;
                    PowerSplit ps{a1, b1, a2, b2};
                    const ConstraintSet cs = cfg.mode == GaussianMode::CmacCmInner
                                                 ? cmaccm_inner_constraints(gp, ps)
                                                 : compound_capacity_constraints(gp, ps);
                    for (const auto& v : vertices_of(cs)) points.push_back(v);
                }
        }

    RegionCloud cloud;
    cloud.points = std::move(points);
    finalize_points(cloud.points);
    cloud.meta.provenance = cfg.mode == GaussianMode::CmacCmInner ? "thm5" : "thm6";
    std::ostringstream os;
    os << gp.echo() << " mode=" << to_string(cfg.mode) << " steps=" << cfg.steps;
    cloud.meta.config = os.str();
    return cloud;
}

// Per-axis extreme of the swept region, from closed-form boundary splits.
// For r1 the secrecy difference C(h1 P) - C(g1 P) is monotone in P whenever
// h1 > g1, so the extreme sits at P_U' = P1; the other axes peak at the
// all-private or all-common boundary splits.
inline double max_rate(const GaussianParams& gp, GaussianMode mode, RateAxis axis) {
    gp.validate();
    const double coh_h =
        gp.h1 * gp.p1 + gp.h2 * gp.p2 + 2.0 * std::sqrt(gp.h1 * gp.h2 * gp.p1 * gp.p2);
    const double coh_g =
        gp.g1 * gp.p1 + gp.g2 * gp.p2 + 2.0 * std::sqrt(gp.g1 * gp.g2 * gp.p1 * gp.p2);
    if (mode == GaussianMode::CmacCmInner) {
        switch (axis) {
            case RateAxis::R0:
                return std::min(c_fn(coh_g), c_fn(coh_h));
            case RateAxis::R1: {
                const double d = c_fn(gp.h1 * gp.p1) - c_fn(gp.g1 * gp.p1);
                return d > 0.0 ? d : 0.0;
            }
            case RateAxis::R2:
                return std::min(c_fn(gp.h2 * gp.p2), c_fn(gp.g2 * gp.p2));
        }
    } else {
        switch (axis) {
            case RateAxis::R0:
                return std::min(c_fn(coh_h), c_fn(coh_g));
            case RateAxis::R1:
                return std::min(c_fn(gp.h1 * gp.p1), c_fn(gp.g1 * gp.p1));
            case RateAxis::R2:
                return std::min(c_fn(gp.h2 * gp.p2), c_fn(gp.g2 * gp.p2));
        }
    }
    throw UsageError("max_rate: unknown axis");
}

}  // namespace cmaccm
