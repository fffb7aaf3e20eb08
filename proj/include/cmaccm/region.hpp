#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmaccm/errors.hpp"
#include "cmaccm/hull3.hpp"
#include "cmaccm/linprog.hpp"

namespace cmaccm {

// Deduplication threshold for swept point clouds.
inline constexpr double kCloudDedupTol = 1e-12;
// Feasibility slack when re-checking generated vertices.
inline constexpr double kVertexFeasTol = 1e-9;

struct RateTuple {
    double r0 = 0.0, r1 = 0.0, r2 = 0.0;

    std::array<double, 3> as_array() const { return {r0, r1, r2}; }
    double axis(std::size_t k) const { return k == 0 ? r0 : (k == 1 ? r1 : r2); }

    bool operator==(const RateTuple& o) const { return r0 == o.r0 && r1 == o.r1 && r2 == o.r2; }
    bool operator<(const RateTuple& o) const {
        if (r0 != o.r0) return r0 < o.r0;
        if (r1 != o.r1) return r1 < o.r1;
        return r2 < o.r2;
    }
    // Coordinate-wise dominance (>= everywhere, > somewhere).
    bool dominates(const RateTuple& o) const {
        return r0 >= o.r0 && r1 >= o.r1 && r2 >= o.r2 && !(*this == o);
    }
};

// One linear upper bound c . (R0,R1,R2) <= bound with c in {0,1}^3.
struct Constraint {
    std::array<int, 3> coeff;
    double bound;
};

// The rate constraints a theorem instance induces for one distribution.
// Bounds are clamped at 0 on insertion (secrecy differences can come out
// negative) and duplicate coefficient vectors are merged by min.
class ConstraintSet {
   public:
    explicit ConstraintSet(std::string provenance) : provenance_(std::move(provenance)) {}

    void add(std::array<int, 3> coeff, double bound) {
        if (!std::isfinite(bound)) throw ValidationError("ConstraintSet: non-finite bound");
        if (coeff[0] == 0 && coeff[1] == 0 && coeff[2] == 0)
            throw UsageError("ConstraintSet: empty coefficient vector");
        bound = bound > 0.0 ? bound : 0.0;
        for (auto& c : rows_)
            if (c.coeff == coeff) {
                c.bound = std::min(c.bound, bound);
                return;
            }
        rows_.push_back({coeff, bound});
    }

    const std::vector<Constraint>& rows() const { return rows_; }
    const std::string& provenance() const { return provenance_; }

    double bound_for(std::array<int, 3> coeff) const {
        for (const auto& c : rows_)
            if (c.coeff == coeff) return c.bound;
        throw UsageError("ConstraintSet: no constraint with requested coefficients");
    }

   private:
    std::string provenance_;
    std::vector<Constraint> rows_;
};

struct CloudMeta {
    std::string provenance;  // constraint family, e.g. "thm5"
    std::string config;      // flat echo of the generating configuration
    std::string note;        // extra labeling, e.g. sampled-outer caveat
    std::optional<std::uint64_t> seed;
    bool closed = false;  // set by convex_closure
};

struct RegionCloud {
    std::vector<RateTuple> points;
    CloudMeta meta;
};

// Canonical form: coordinates snapped to the dedup grid, lexicographically
// sorted, exact duplicates removed. Snapping makes the within-tol dedup
// independent of point interleaving and of which pipeline produced the
// values (solver noise sits around 1e-15, far inside one grid cell).
inline void finalize_points(std::vector<RateTuple>& pts, double tol = kCloudDedupTol) {
    auto snap = [tol](double x) {
        return static_cast<double>(std::llround(x / tol)) * tol;
    };
    for (auto& p : pts) {
        p.r0 = snap(p.r0);
        p.r1 = snap(p.r1);
        p.r2 = snap(p.r2);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// All vertices of { R >= 0, c_i . R <= b_i } by enumerating plane triples.
// Axes appearing in no constraint only meet the region boundary at their
// coordinate plane, so every vertex carries 0 there.
inline std::vector<RateTuple> vertices_of(const ConstraintSet& cs) {
    struct Plane {
        std::array<double, 3> a;
        double b;
    };
    std::vector<Plane> planes = {{{1, 0, 0}, 0.0}, {{0, 1, 0}, 0.0}, {{0, 0, 1}, 0.0}};
    for (const auto& c : cs.rows())
        planes.push_back({{static_cast<double>(c.coeff[0]), static_cast<double>(c.coeff[1]),
                           static_cast<double>(c.coeff[2])},
                          c.bound});

    auto feasible = [&](const std::array<double, 3>& r) {
        for (double x : r)
            if (x < -kVertexFeasTol || !std::isfinite(x)) return false;
        for (const auto& c : cs.rows()) {
            double lhs = c.coeff[0] * r[0] + c.coeff[1] * r[1] + c.coeff[2] * r[2];
            if (lhs > c.bound + kVertexFeasTol) return false;
        }
        return true;
    };

    std::vector<RateTuple> verts;
    const std::size_t m = planes.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                const auto& A = planes[i].a;
                const auto& B = planes[j].a;
                const auto& C = planes[k].a;
                const double det = A[0] * (B[1] * C[2] - B[2] * C[1]) -
                                   A[1] * (B[0] * C[2] - B[2] * C[0]) +
                                   A[2] * (B[0] * C[1] - B[1] * C[0]);
                if (std::abs(det) < 1e-12) continue;
                const double b0 = planes[i].b, b1 = planes[j].b, b2 = planes[k].b;
                // Cramer's rule.
                std::array<double, 3> r;
                r[0] = (b0 * (B[1] * C[2] - B[2] * C[1]) - A[1] * (b1 * C[2] - B[2] * b2) +
                        A[2] * (b1 * C[1] - B[1] * b2)) /
                       det;
                r[1] = (A[0] * (b1 * C[2] - B[2] * b2) - b0 * (B[0] * C[2] - B[2] * C[0]) +
                        A[2] * (B[0] * b2 - b1 * C[0])) /
                       det;
                r[2] = (A[0] * (B[1] * b2 - b1 * C[1]) - A[1] * (B[0] * b2 - b1 * C[0]) +
                        b0 * (B[0] * C[1] - B[1] * C[0])) /
                       det;
                if (!feasible(r)) continue;
                verts.push_back({r[0] > 0.0 ? r[0] : 0.0, r[1] > 0.0 ? r[1] : 0.0,
                                 r[2] > 0.0 ? r[2] : 0.0});
            }
    if (verts.empty()) verts.push_back({0.0, 0.0, 0.0});
    finalize_points(verts);
    return verts;
}

// Maximal points under coordinate-wise dominance. O(n log n) staircase sweep.
inline std::vector<RateTuple> pareto_frontier_points(std::vector<RateTuple> pts) {
    finalize_points(pts);
    if (pts.empty()) return pts;
    // Descending lexicographic order; earlier points are never dominated by
    // later ones. Staircase over (r1, r2) of kept points answers dominance.
    std::sort(pts.begin(), pts.end(), [](const RateTuple& a, const RateTuple& b) { return b < a; });
    std::map<double, double> stair;  // r1 -> max r2, strictly decreasing r2 in r1
    std::vector<RateTuple> keep;
    keep.reserve(pts.size());
    for (const auto& p : pts) {
        auto it = stair.lower_bound(p.r1);
        if (it != stair.end() && it->second >= p.r2) continue;  // dominated
        keep.push_back(p);
        it = stair.lower_bound(p.r1);
        if (it != stair.end() && it->first == p.r1) {
            if (it->second >= p.r2) continue;
            it->second = p.r2;
        } else {
            it = stair.emplace(p.r1, p.r2).first;
        }
        // Restore the antichain invariant below the new step.
        while (it != stair.begin()) {
            auto prev = std::prev(it);
            if (prev->second <= it->second)
                stair.erase(prev);
            else
                break;
        }
    }
    finalize_points(keep);
    return keep;
}

inline std::vector<RateTuple> pareto_frontier(const RegionCloud& cloud) {
    if (cloud.points.empty()) throw UsageError("pareto_frontier: empty cloud");
    return pareto_frontier_points(cloud.points);
}

// Downward-closed convex closure (time sharing plus rate discarding).
// The vertex set of conv(S union zero-outs(S)) is computed from the Pareto
// frontier: every extreme point is a coordinate zero-out of a maximal point.
inline RegionCloud convex_closure(const RegionCloud& cloud) {
    if (cloud.points.empty()) throw UsageError("convex_closure: empty cloud");
    std::vector<RateTuple> frontier = pareto_frontier_points(cloud.points);
    std::vector<RateTuple> reps;
    reps.reserve(frontier.size() * 8 + 1);
    for (const auto& p : frontier)
        for (int mask = 0; mask < 8; ++mask)
            reps.push_back({(mask & 1) ? 0.0 : p.r0, (mask & 2) ? 0.0 : p.r1,
                            (mask & 4) ? 0.0 : p.r2});
    reps.push_back({0.0, 0.0, 0.0});
    finalize_points(reps);

    std::vector<std::array<double, 3>> arr(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) arr[i] = reps[i].as_array();
    std::vector<std::size_t> idx = extreme_point_indices(arr);

    // Facet- and edge-interior points can survive the hull scan when many
    // candidates are collinear (sweeps produce whole segments of them).
    // Keep only true extreme points: p is dropped iff it is an exact convex
    // combination of the other surviving candidates.
    std::vector<std::array<double, 3>> hull_pts;
    hull_pts.reserve(idx.size());
    for (std::size_t i : idx) hull_pts.push_back(arr[i]);
    std::vector<char> extreme(hull_pts.size(), 1);
    std::vector<std::array<double, 3>> others;
    others.reserve(hull_pts.size());
    for (std::size_t i = 0; i < hull_pts.size(); ++i) {
        others.clear();
        for (std::size_t j = 0; j < hull_pts.size(); ++j)
            if (j != i) others.push_back(hull_pts[j]);
        if (convex_combination_exists(others, hull_pts[i], 1e-12)) extreme[i] = 0;
    }

    RegionCloud out;
    out.points.reserve(hull_pts.size());
    for (std::size_t i = 0; i < hull_pts.size(); ++i)
        if (extreme[i]) out.points.push_back(reps[idx[i]]);
    finalize_points(out.points);
    out.meta = cloud.meta;
    out.meta.closed = true;
    return out;
}

// Membership in the downward-closed convex hull described by a closed cloud.
inline bool contains(const RegionCloud& cloud, const RateTuple& p, double tol) {
    if (!cloud.meta.closed)
        throw UsageError("contains: cloud is not a convex_closure output");
    if (cloud.points.empty()) throw UsageError("contains: empty cloud");
    std::vector<std::array<double, 3>> verts(cloud.points.size());
    for (std::size_t i = 0; i < verts.size(); ++i) verts[i] = cloud.points[i].as_array();
    return convex_dominating_combination_exists(verts, {p.r0 - tol, p.r1 - tol, p.r2 - tol});
}

enum class RateAxis { R0 = 0, R1 = 1, R2 = 2 };

inline RateAxis parse_axis(const std::string& s) {
    if (s == "R0" || s == "r0") return RateAxis::R0;
    if (s == "R1" || s == "r1") return RateAxis::R1;
    if (s == "R2" || s == "r2") return RateAxis::R2;
    throw UsageError("unknown rate axis label '" + s + "'");
}

// Coordinate shadow onto an axis pair (no maximization over the dropped
// coordinate).
inline std::vector<std::array<double, 2>> project(const RegionCloud& cloud, RateAxis a,
                                                  RateAxis b) {
    if (a == b) throw UsageError("project: duplicate axis labels");
    std::vector<std::array<double, 2>> out;
    out.reserve(cloud.points.size());
    for (const auto& p : cloud.points)
        out.push_back({p.axis(static_cast<std::size_t>(a)), p.axis(static_cast<std::size_t>(b))});
    return out;
}

inline std::array<double, 3> axis_maxima(const RegionCloud& cloud) {
    std::array<double, 3> mx = {0.0, 0.0, 0.0};
    for (const auto& p : cloud.points)
        for (std::size_t k = 0; k < 3; ++k) mx[k] = std::max(mx[k], p.axis(k));
    return mx;
}

struct ComparisonReport {
    std::array<double, 3> a_max = {0, 0, 0};
    std::array<double, 3> b_max = {0, 0, 0};
    bool a_subset_of_b = false;
    bool b_subset_of_a = false;
    std::optional<RateTuple> witness_a_not_in_b;
    std::optional<RateTuple> witness_b_not_in_a;
    double tol = 0.0;

    std::string verdict() const {
        if (a_subset_of_b && b_subset_of_a) return "equal";
        if (a_subset_of_b) return "a_subset_of_b";
        if (b_subset_of_a) return "b_subset_of_a";
        return "incomparable";
    }
};

inline ComparisonReport compare(const RegionCloud& a, const RegionCloud& b, double tol) {
    if (tol <= 0.0) throw UsageError("compare: tolerance must be positive");
    if (!a.meta.closed || !b.meta.closed)
        throw UsageError("compare: inputs must be convex_closure outputs");
    ComparisonReport rep;
    rep.tol = tol;
    rep.a_max = axis_maxima(a);
    rep.b_max = axis_maxima(b);
    rep.a_subset_of_b = true;
    for (const auto& v : a.points)
        if (!contains(b, v, tol)) {
            rep.a_subset_of_b = false;
            rep.witness_a_not_in_b = v;
            break;
        }
    rep.b_subset_of_a = true;
    for (const auto& v : b.points)
        if (!contains(a, v, tol)) {
            rep.b_subset_of_a = false;
            rep.witness_b_not_in_a = v;
            break;
        }
    return rep;
}

}  // namespace cmaccm
