#pragma once

// Independent nested-loop re-enumerations of the theorem sweeps, used for
// cloud-equality checks and to produce the committed golden files. Joint
// tables are assembled with explicit loops and all information terms go
// through the direct-summation oracle.

#include <functional>
#include <vector>

#include "cmaccm/channel.hpp"
#include "cmaccm/region.hpp"
#include "support/oracles.hpp"

namespace oracle {

inline std::vector<cmaccm::RateTuple> inner_sweep_reference(const cmaccm::DmChannel& ch,
                                                            std::size_t k, std::size_t nu,
                                                            std::size_t nv1) {
    const std::size_t nx1 = ch.x1_size(), nx2 = ch.x2_size();
    const std::size_t ny1 = ch.y1_size(), ny2 = ch.y2_size();
    std::vector<std::vector<double>> gu, gv1, gx1, gx2;
    for_each_composition(nu, k, [&](const std::vector<double>& p) { gu.push_back(p); });
    for_each_composition(nv1, k, [&](const std::vector<double>& p) { gv1.push_back(p); });
    for_each_composition(nx1, k, [&](const std::vector<double>& p) { gx1.push_back(p); });
    for_each_composition(nx2, k, [&](const std::vector<double>& p) { gx2.push_back(p); });

    std::vector<cmaccm::RateTuple> points;
    const std::vector<std::size_t> sizes{nu, nv1, nx2, ny1, ny2};
    std::vector<double> table(nu * nv1 * nx2 * ny1 * ny2);
    std::vector<std::size_t> iv1(nu), ix1(nv1), ix2(nu);

    auto run_law = [&](const std::vector<double>& pu) {
        std::fill(table.begin(), table.end(), 0.0);
        for (std::size_t u = 0; u < nu; ++u)
            for (std::size_t v1 = 0; v1 < nv1; ++v1)
                for (std::size_t x1 = 0; x1 < nx1; ++x1)
                    for (std::size_t x2 = 0; x2 < nx2; ++x2) {
                        const double pin =
                            pu[u] * gv1[iv1[u]][v1] * gx1[ix1[v1]][x1] * gx2[ix2[u]][x2];
                        if (pin == 0.0) continue;
                        for (std::size_t y1 = 0; y1 < ny1; ++y1)
                            for (std::size_t y2 = 0; y2 < ny2; ++y2)
                                table[(((u * nv1 + v1) * nx2 + x2) * ny1 + y1) * ny2 + y2] +=
                                    pin * ch.prob(x1, x2, y1, y2);
                    }
        FlatJoint j{sizes, table};
        // variable indices: U=0, V1=1, X2=2, Y1=3, Y2=4
        const double leak = cmi_direct(j, {1}, {4}, {2, 0});
        const double r1 = cmi_direct(j, {1}, {3}, {2, 0}) - leak;
        const double r2 =
            std::min(cmi_direct(j, {2}, {3}, {1, 0}), cmi_direct(j, {2}, {4}, {0}));
        const double r02 = cmi_direct(j, {0, 2}, {4}, {});
        const double r12 = cmi_direct(j, {1, 2}, {3}, {0}) - leak;
        const double r012 = cmi_direct(j, {1, 2}, {3}, {}) - leak;
        std::vector<OracleConstraint> cons = {
            {{0, 1, 0}, std::max(r1, 0.0)},  {{0, 0, 1}, std::max(r2, 0.0)},
            {{1, 0, 1}, std::max(r02, 0.0)}, {{0, 1, 1}, std::max(r12, 0.0)},
            {{1, 1, 1}, std::max(r012, 0.0)},
        };
        for (const auto& v : vertices_reference(cons)) points.push_back(v);
    };

    std::function<void(std::size_t, const std::vector<double>&)> loop_x2 =
        [&](std::size_t pos, const std::vector<double>& pu) {
            if (pos == nu) {
                run_law(pu);
                return;
            }
            for (std::size_t i = 0; i < gx2.size(); ++i) {
                ix2[pos] = i;
                loop_x2(pos + 1, pu);
            }
        };
    std::function<void(std::size_t, const std::vector<double>&)> loop_x1 =
        [&](std::size_t pos, const std::vector<double>& pu) {
            if (pos == nv1) {
                loop_x2(0, pu);
                return;
            }
            for (std::size_t i = 0; i < gx1.size(); ++i) {
                ix1[pos] = i;
                loop_x1(pos + 1, pu);
            }
        };
    std::function<void(std::size_t, const std::vector<double>&)> loop_v1 =
        [&](std::size_t pos, const std::vector<double>& pu) {
            if (pos == nu) {
                loop_x1(0, pu);
                return;
            }
            for (std::size_t i = 0; i < gv1.size(); ++i) {
                iv1[pos] = i;
                loop_v1(pos + 1, pu);
            }
        };
    for (const auto& pu : gu) loop_v1(0, pu);

    cmaccm::finalize_points(points);
    return points;
}

inline std::vector<cmaccm::RateTuple> outer_sweep_reference(const cmaccm::DmChannel& ch,
                                                            std::size_t k, std::size_t nu,
                                                            std::size_t nv1, std::size_t nv2) {
    const std::size_t nx1 = ch.x1_size(), nx2 = ch.x2_size();
    const std::size_t ny1 = ch.y1_size(), ny2 = ch.y2_size();
    std::vector<std::vector<double>> gu, gv, gx1, gx2;
    for_each_composition(nu, k, [&](const std::vector<double>& p) { gu.push_back(p); });
    for_each_composition(nv1 * nv2, k, [&](const std::vector<double>& p) { gv.push_back(p); });
    for_each_composition(nx1, k, [&](const std::vector<double>& p) { gx1.push_back(p); });
    for_each_composition(nx2, k, [&](const std::vector<double>& p) { gx2.push_back(p); });

    std::vector<cmaccm::RateTuple> points;
    const std::vector<std::size_t> sizes{nu, nv1, nv2, ny1, ny2};
    std::vector<double> table(nu * nv1 * nv2 * ny1 * ny2);
    std::vector<std::size_t> ivrow(nu), ix1(nv1), ix2(nv2);

    auto run_law = [&](const std::vector<double>& pu) {
        std::fill(table.begin(), table.end(), 0.0);
        for (std::size_t u = 0; u < nu; ++u)
            for (std::size_t v1 = 0; v1 < nv1; ++v1)
                for (std::size_t v2 = 0; v2 < nv2; ++v2) {
                    // row layout: index v2*|V1| + v1 (v1 fastest)
                    const double pv = pu[u] * gv[ivrow[u]][v2 * nv1 + v1];
                    if (pv == 0.0) continue;
                    for (std::size_t x1 = 0; x1 < nx1; ++x1)
                        for (std::size_t x2 = 0; x2 < nx2; ++x2) {
                            const double pin = pv * gx1[ix1[v1]][x1] * gx2[ix2[v2]][x2];
                            if (pin == 0.0) continue;
                            for (std::size_t y1 = 0; y1 < ny1; ++y1)
                                for (std::size_t y2 = 0; y2 < ny2; ++y2)
                                    table[(((u * nv1 + v1) * nv2 + v2) * ny1 + y1) * ny2 + y2] +=
                                        pin * ch.prob(x1, x2, y1, y2);
                        }
                }
        FlatJoint j{sizes, table};
        // variable indices: U=0, V1=1, V2=2, Y1=3, Y2=4
        const double leak = cmi_direct(j, {1}, {4}, {0, 2});
        const double r0 = std::min(cmi_direct(j, {0}, {3}, {}), cmi_direct(j, {0}, {4}, {}));
        const double r1 = cmi_direct(j, {1}, {3}, {0, 2}) - leak;
        const double r2 = std::min(cmi_direct(j, {2}, {3}, {}), cmi_direct(j, {2}, {4}, {}));
        const double r12 = cmi_direct(j, {1, 2}, {3}, {}) - leak;
        std::vector<OracleConstraint> cons = {
            {{1, 0, 0}, std::max(r0, 0.0)},
            {{0, 1, 0}, std::max(r1, 0.0)},
            {{0, 0, 1}, std::max(r2, 0.0)},
            {{0, 1, 1}, std::max(r12, 0.0)},
        };
        for (const auto& v : vertices_reference(cons)) points.push_back(v);
    };

    std::function<void(std::size_t, const std::vector<double>&)> loop_x2 =
        [&](std::size_t pos, const std::vector<double>& pu) {
            if (pos == nv2) {
                run_law(pu);
                return;
            }
            for (std::size_t i = 0; i < gx2.size(); ++i) {
                ix2[pos] = i;
                loop_x2(pos + 1, pu);
            }
        };
    std::function<void(std::size_t, const std::vector<double>&)> loop_x1 =
        [&](std::size_t pos, const std::vector<double>& pu) {
            if (pos == nv1) {
                loop_x2(0, pu);
                return;
            }
            for (std::size_t i = 0; i < gx1.size(); ++i) {
                ix1[pos] = i;
                loop_x1(pos + 1, pu);
            }
        };
    std::function<void(std::size_t, const std::vector<double>&)> loop_v =
        [&](std::size_t pos, const std::vector<double>& pu) {
            if (pos == nu) {
                loop_x1(0, pu);
                return;
            }
            for (std::size_t i = 0; i < gv.size(); ++i) {
                ivrow[pos] = i;
                loop_v(pos + 1, pu);
            }
        };
    for (const auto& pu : gu) loop_v(0, pu);

    cmaccm::finalize_points(points);
    return points;
}

}  // namespace oracle
