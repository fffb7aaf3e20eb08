#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cmaccm/errors.hpp"

namespace cmaccm {

namespace hull_detail {

using Vec3 = std::array<double, 3>;

inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Face {
    std::array<int, 3> v;    // CCW from outside
    Vec3 n;                  // unit outward normal
    double d;                // plane: dot(n,x) = d
    std::array<int, 3> adj;  // adj[i] across edge (v[i] -> v[i+1])
    std::vector<int> outside;
    int far_idx = -1;
    double far_dist = 0.0;
    bool alive = true;
};

inline double plane_dist(const Face& f, const Vec3& p) { return dot(f.n, p) - f.d; }

// Andrew monotone chain on projected coordinates; returns hull vertex
// positions into `order` (indices into pts2).
inline std::vector<std::size_t> hull2d(const std::vector<std::array<double, 2>>& pts2,
                                       double eps_area) {
    std::vector<std::size_t> order(pts2.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pts2[a][0] != pts2[b][0]) return pts2[a][0] < pts2[b][0];
        return pts2[a][1] < pts2[b][1];
    });
    auto cross2 = [&](std::size_t o, std::size_t a, std::size_t b) {
        return (pts2[a][0] - pts2[o][0]) * (pts2[b][1] - pts2[o][1]) -
               (pts2[a][1] - pts2[o][1]) * (pts2[b][0] - pts2[o][0]);
    };
    std::vector<std::size_t> h;
    h.reserve(order.size() * 2);
    for (std::size_t i = 0; i < order.size(); ++i) {  // lower
        while (h.size() >= 2 && cross2(h[h.size() - 2], h[h.size() - 1], order[i]) <= eps_area)
            h.pop_back();
        h.push_back(order[i]);
    }
    const std::size_t lower_size = h.size() + 1;
    for (std::size_t i = order.size(); i-- > 1;) {  // upper
        while (h.size() >= lower_size && cross2(h[h.size() - 2], h[h.size() - 1], order[i - 1]) <= eps_area)
            h.pop_back();
        h.push_back(order[i - 1]);
    }
    h.pop_back();  // first point repeated
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
    return h;
}

}  // namespace hull_detail

// Indices of the extreme points (convex hull vertices) of a 3-D point set.
// Handles degenerate affine rank (point / segment / planar set) explicitly.
// Input is expected to be deduplicated; output is sorted and unique.
inline std::vector<std::size_t> extreme_point_indices(
    const std::vector<std::array<double, 3>>& pts) {
    using namespace hull_detail;
    const std::size_t n = pts.size();
    if (n == 0) return {};
    if (n == 1) return {0};

    double scale = 0.0;
    for (const auto& p : pts)
        for (double c : p) scale = std::max(scale, std::abs(c));
    const double eps = 1e-9 * std::max(1.0, scale);

    // Affine rank probe: furthest-point pivots p0..p3.
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (pts[i] < pts[i0]) i0 = i;
    std::size_t i1 = i0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = norm(sub(pts[i], pts[i0]));
        if (d > best) best = d, i1 = i;
    }
    if (best <= eps) return {i0};  // all coincident

    const Vec3 dir = sub(pts[i1], pts[i0]);
    std::size_t i2 = i0;
    best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = norm(cross(dir, sub(pts[i], pts[i0])));
        if (d > best) best = d, i2 = i;
    }
    if (best <= eps * norm(dir)) {
        // Collinear: keep the two extreme projections.
        std::size_t lo = i0, hi = i0;
        for (std::size_t i = 0; i < n; ++i) {
            double t = dot(sub(pts[i], pts[i0]), dir);
            if (t < dot(sub(pts[lo], pts[i0]), dir)) lo = i;
            if (t > dot(sub(pts[hi], pts[i0]), dir)) hi = i;
        }
        std::vector<std::size_t> out{lo, hi};
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    Vec3 nrm = cross(dir, sub(pts[i2], pts[i0]));
    std::size_t i3 = i0;
    best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = std::abs(dot(nrm, sub(pts[i], pts[i0])));
        if (d > best) best = d, i3 = i;
    }
    if (best <= eps * norm(nrm)) {
        // Coplanar: 2-D hull in an in-plane orthonormal basis.
        Vec3 e1 = dir;
        double l1 = norm(e1);
        for (auto& c : e1) c /= l1;
        Vec3 raw2 = sub(pts[i2], pts[i0]);
        double t = dot(raw2, e1);
        Vec3 e2 = {raw2[0] - t * e1[0], raw2[1] - t * e1[1], raw2[2] - t * e1[2]};
        double l2 = norm(e2);
        for (auto& c : e2) c /= l2;
        std::vector<std::array<double, 2>> proj(n);
        for (std::size_t i = 0; i < n; ++i) {
            Vec3 r = sub(pts[i], pts[i0]);
            proj[i] = {dot(r, e1), dot(r, e2)};
        }
        return hull2d(proj, eps * eps);
    }

    // Full-rank: quickhull.
    std::vector<Face> faces;
    faces.reserve(128);
    const Vec3 centroid = {
        (pts[i0][0] + pts[i1][0] + pts[i2][0] + pts[i3][0]) / 4.0,
        (pts[i0][1] + pts[i1][1] + pts[i2][1] + pts[i3][1]) / 4.0,
        (pts[i0][2] + pts[i1][2] + pts[i2][2] + pts[i3][2]) / 4.0,
    };

    auto make_face = [&](int a, int b, int c) {
        Face f;
        f.v = {a, b, c};
        Vec3 nr = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
        double l = norm(nr);
        if (l <= 0.0) throw Error("hull: degenerate face");
        for (auto& x : nr) x /= l;
        f.n = nr;
        f.d = dot(nr, pts[a]);
        if (plane_dist(f, centroid) > 0.0) {  // flip to outward
            std::swap(f.v[1], f.v[2]);
            for (auto& x : f.n) x = -x;
            f.d = -f.d;
        }
        f.adj = {-1, -1, -1};
        return f;
    };

    const std::array<int, 4> t = {static_cast<int>(i0), static_cast<int>(i1),
                                  static_cast<int>(i2), static_cast<int>(i3)};
    faces.push_back(make_face(t[0], t[1], t[2]));
    faces.push_back(make_face(t[0], t[1], t[3]));
    faces.push_back(make_face(t[0], t[2], t[3]));
    faces.push_back(make_face(t[1], t[2], t[3]));

    auto link_all = [&](const std::vector<int>& ids) {
        // Brute-force edge matching among a small set of faces.
        for (int fi : ids)
            for (int gi : ids) {
                if (fi == gi) continue;
                Face& f = faces[fi];
                const Face& g = faces[gi];
                for (int e = 0; e < 3; ++e) {
                    int a = f.v[e], b = f.v[(e + 1) % 3];
                    for (int e2 = 0; e2 < 3; ++e2)
                        if (g.v[e2] == b && g.v[(e2 + 1) % 3] == a) f.adj[e] = gi;
                }
            }
    };
    link_all({0, 1, 2, 3});

    auto push_outside = [&](int fi, int pi) {
        Face& f = faces[fi];
        double d = plane_dist(f, pts[pi]);
        f.outside.push_back(pi);
        if (d > f.far_dist) {
            f.far_dist = d;
            f.far_idx = pi;
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        int best_face = -1;
        double best_d = eps;
        for (int fi = 0; fi < 4; ++fi) {
            double d = plane_dist(faces[fi], pts[i]);
            if (d > best_d) best_d = d, best_face = fi;
        }
        if (best_face >= 0) push_outside(best_face, static_cast<int>(i));
    }

    std::vector<int> pending;
    for (int fi = 0; fi < 4; ++fi)
        if (!faces[fi].outside.empty()) pending.push_back(fi);

    while (!pending.empty()) {
        int start = pending.back();
        pending.pop_back();
        if (!faces[start].alive || faces[start].outside.empty()) continue;
        const int apex = faces[start].far_idx;
        const Vec3 ap = pts[apex];

        // Visible region: BFS over adjacency from the seed face.
        std::vector<int> visible;
        std::vector<int> stack{start};
        std::vector<char> seen(faces.size(), 0);
        seen[start] = 1;
        while (!stack.empty()) {
            int fi = stack.back();
            stack.pop_back();
            visible.push_back(fi);
            for (int e = 0; e < 3; ++e) {
                int gi = faces[fi].adj[e];
                if (gi < 0 || seen[gi] || !faces[gi].alive) continue;
                if (plane_dist(faces[gi], ap) > eps) {
                    seen[gi] = 1;
                    stack.push_back(gi);
                }
            }
        }

        // Horizon: edges of visible faces whose neighbor stays.
        struct HorizonEdge {
            int a, b, neighbor;
        };
        std::vector<HorizonEdge> horizon;
        for (int fi : visible)
            for (int e = 0; e < 3; ++e) {
                int gi = faces[fi].adj[e];
                if (gi >= 0 && !seen[gi])
                    horizon.push_back({faces[fi].v[e], faces[fi].v[(e + 1) % 3], gi});
            }
        if (horizon.empty()) {  // apex numerically inside after all; drop it
            Face& f = faces[start];
            f.outside.erase(std::remove(f.outside.begin(), f.outside.end(), apex), f.outside.end());
            f.far_idx = -1;
            f.far_dist = 0.0;
            for (int pi : f.outside) {
                double d = plane_dist(f, pts[pi]);
                if (d > f.far_dist) f.far_dist = d, f.far_idx = pi;
            }
            if (f.far_idx >= 0) pending.push_back(start);
            continue;
        }

        std::vector<int> orphaned;
        for (int fi : visible) {
            faces[fi].alive = false;
            for (int pi : faces[fi].outside)
                if (pi != apex) orphaned.push_back(pi);
            faces[fi].outside.clear();
        }

        // New fan: one face per horizon edge, joined at the apex.
        std::vector<int> new_ids;
        new_ids.reserve(horizon.size());
        for (const auto& he : horizon) {
            Face nf = make_face(he.a, he.b, apex);
            int id = static_cast<int>(faces.size());
            faces.push_back(std::move(nf));
            new_ids.push_back(id);
        }
        // Stitch adjacency: across (a,b) the old neighbor; apex edges pair
        // between consecutive fan faces.
        std::vector<std::pair<int, int>> by_first, by_second;  // vertex -> fan face
        for (std::size_t k = 0; k < horizon.size(); ++k) {
            by_first.emplace_back(horizon[k].a, new_ids[k]);
            by_second.emplace_back(horizon[k].b, new_ids[k]);
        }
        auto find_in = [](const std::vector<std::pair<int, int>>& m, int key) {
            for (const auto& kv : m)
                if (kv.first == key) return kv.second;
            return -1;
        };
        for (std::size_t k = 0; k < horizon.size(); ++k) {
            Face& nf = faces[new_ids[k]];
            const auto& he = horizon[k];
            for (int e = 0; e < 3; ++e) {
                int a = nf.v[e], b = nf.v[(e + 1) % 3];
                if ((a == he.a && b == he.b) || (a == he.b && b == he.a)) {
                    nf.adj[e] = he.neighbor;
                    Face& old = faces[he.neighbor];
                    for (int e2 = 0; e2 < 3; ++e2)
                        if ((old.v[e2] == he.a && old.v[(e2 + 1) % 3] == he.b) ||
                            (old.v[e2] == he.b && old.v[(e2 + 1) % 3] == he.a))
                            old.adj[e2] = new_ids[k];
                } else if (a == apex) {
                    // edge (apex -> b): pairs with the fan face whose
                    // horizon edge ends at b
                    nf.adj[e] = find_in(by_second, b);
                } else if (b == apex) {
                    // edge (a -> apex): pairs with the fan face whose
                    // horizon edge starts at a
                    nf.adj[e] = find_in(by_first, a);
                }
            }
        }

        for (int pi : orphaned) {
            int best_face = -1;
            double best_d = eps;
            for (int id : new_ids) {
                double d = plane_dist(faces[id], pts[pi]);
                if (d > best_d) best_d = d, best_face = id;
            }
            if (best_face >= 0) push_outside(best_face, pi);
        }
        for (int id : new_ids)
            if (!faces[id].outside.empty()) pending.push_back(id);
    }

    std::vector<std::size_t> out;
    for (const auto& f : faces)
        if (f.alive)
            for (int v : f.v) out.push_back(static_cast<std::size_t>(v));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace cmaccm
