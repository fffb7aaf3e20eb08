#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cmaccm/channel.hpp"
#include "cmaccm/joint_pmf.hpp"
#include "cmaccm/pmf.hpp"

namespace cmaccm {

// Auxiliary chain p(u) p(v1|u) p(x1|v1) p(x2|u) feeding the inner bound.
struct InnerAuxLaw {
    Pmf p_u;
    ConditionalPmf p_v1_given_u;
    ConditionalPmf p_x1_given_v1;
    ConditionalPmf p_x2_given_u;

    std::size_t u_size() const { return p_u.support_size(); }
    std::size_t v1_size() const { return p_v1_given_u.out_size(); }
    std::size_t x1_size() const { return p_x1_given_v1.out_size(); }
    std::size_t x2_size() const { return p_x2_given_u.out_size(); }

    void validate() const {
        if (p_v1_given_u.given_size() != u_size())
            throw ValidationError("InnerAuxLaw: p(v1|u) row count != |U|");
        if (p_x1_given_v1.given_size() != v1_size())
            throw ValidationError("InnerAuxLaw: p(x1|v1) row count != |V1|");
        if (p_x2_given_u.given_size() != u_size())
            throw ValidationError("InnerAuxLaw: p(x2|u) row count != |U|");
    }
};

// Auxiliary chain p(u) p(v1,v2|u) p(x1|v1) p(x2|v2) feeding the outer bound.
// Rows of p_v1v2_given_u run over the product alphabet V1 x V2 with index
// v2 * v1_size + v1 (v1 varies fastest).
struct OuterAuxLaw {
    Pmf p_u;
    std::size_t v1_size_field;
    std::size_t v2_size_field;
    ConditionalPmf p_v1v2_given_u;
    ConditionalPmf p_x1_given_v1;
    ConditionalPmf p_x2_given_v2;

    std::size_t u_size() const { return p_u.support_size(); }
    std::size_t v1_size() const { return v1_size_field; }
    std::size_t v2_size() const { return v2_size_field; }
    std::size_t x1_size() const { return p_x1_given_v1.out_size(); }
    std::size_t x2_size() const { return p_x2_given_v2.out_size(); }

    double p_v1v2(std::size_t u, std::size_t v1, std::size_t v2) const {
        return p_v1v2_given_u.prob(u, v2 * v1_size_field + v1);
    }

    void validate() const {
        if (v1_size_field == 0 || v2_size_field == 0)
            throw ValidationError("OuterAuxLaw: zero-size auxiliary alphabet");
        if (p_v1v2_given_u.given_size() != u_size())
            throw ValidationError("OuterAuxLaw: p(v1,v2|u) row count != |U|");
        if (p_v1v2_given_u.out_size() != v1_size_field * v2_size_field)
            throw ValidationError("OuterAuxLaw: p(v1,v2|u) row length != |V1|*|V2|");
        if (p_x1_given_v1.given_size() != v1_size_field)
            throw ValidationError("OuterAuxLaw: p(x1|v1) row count != |V1|");
        if (p_x2_given_v2.given_size() != v2_size_field)
            throw ValidationError("OuterAuxLaw: p(x2|v2) row count != |V2|");
    }
};

inline void check_inner_chain(const InnerAuxLaw& aux, const DmChannel& ch) {
    aux.validate();
    if (aux.x1_size() != ch.x1_size())
        throw ValidationError("inner law: |X1| of aux chain != channel x1_size");
    if (aux.x2_size() != ch.x2_size())
        throw ValidationError("inner law: |X2| of aux chain != channel x2_size");
}

inline void check_outer_chain(const OuterAuxLaw& aux, const DmChannel& ch) {
    aux.validate();
    if (aux.x1_size() != ch.x1_size())
        throw ValidationError("outer law: |X1| of aux chain != channel x1_size");
    if (aux.x2_size() != ch.x2_size())
        throw ValidationError("outer law: |X2| of aux chain != channel x2_size");
}

// Full joint p(u,v1,x1,x2,y1,y2) = p(u)p(v1|u)p(x1|v1)p(x2|u)p(y1,y2|x1,x2).
inline JointPmf build_inner_law(const InnerAuxLaw& aux, const DmChannel& ch) {
    check_inner_chain(aux, ch);
    const std::size_t nu = aux.u_size(), nv1 = aux.v1_size();
    const std::size_t nx1 = ch.x1_size(), nx2 = ch.x2_size();
    const std::size_t ny1 = ch.y1_size(), ny2 = ch.y2_size();
    std::vector<double> table(nu * nv1 * nx1 * nx2 * ny1 * ny2);
    std::size_t flat = 0;
    for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t v1 = 0; v1 < nv1; ++v1) {
            const double p_uv1 = aux.p_u[u] * aux.p_v1_given_u.prob(u, v1);
            for (std::size_t x1 = 0; x1 < nx1; ++x1) {
                const double p_ux1 = p_uv1 * aux.p_x1_given_v1.prob(v1, x1);
                for (std::size_t x2 = 0; x2 < nx2; ++x2) {
                    const double p_in = p_ux1 * aux.p_x2_given_u.prob(u, x2);
                    for (std::size_t y1 = 0; y1 < ny1; ++y1)
                        for (std::size_t y2 = 0; y2 < ny2; ++y2)
                            table[flat++] = p_in * ch.prob(x1, x2, y1, y2);
                }
            }
        }
    return JointPmf({"U", "V1", "X1", "X2", "Y1", "Y2"}, {nu, nv1, nx1, nx2, ny1, ny2},
                    std::move(table));
}

// Full joint p(u,v1,v2,x1,x2,y1,y2) =
// p(u)p(v1,v2|u)p(x1|v1)p(x2|v2)p(y1,y2|x1,x2).
inline JointPmf build_outer_law(const OuterAuxLaw& aux, const DmChannel& ch) {
    check_outer_chain(aux, ch);
    const std::size_t nu = aux.u_size(), nv1 = aux.v1_size(), nv2 = aux.v2_size();
    const std::size_t nx1 = ch.x1_size(), nx2 = ch.x2_size();
    const std::size_t ny1 = ch.y1_size(), ny2 = ch.y2_size();
    std::vector<double> table(nu * nv1 * nv2 * nx1 * nx2 * ny1 * ny2);
    std::size_t flat = 0;
    for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t v1 = 0; v1 < nv1; ++v1)
            for (std::size_t v2 = 0; v2 < nv2; ++v2) {
                const double p_uv = aux.p_u[u] * aux.p_v1v2(u, v1, v2);
                for (std::size_t x1 = 0; x1 < nx1; ++x1) {
                    const double p_ux1 = p_uv * aux.p_x1_given_v1.prob(v1, x1);
                    for (std::size_t x2 = 0; x2 < nx2; ++x2) {
                        const double p_in = p_ux1 * aux.p_x2_given_v2.prob(v2, x2);
                        for (std::size_t y1 = 0; y1 < ny1; ++y1)
                            for (std::size_t y2 = 0; y2 < ny2; ++y2)
                                table[flat++] = p_in * ch.prob(x1, x2, y1, y2);
                    }
                }
            }
    return JointPmf({"U", "V1", "V2", "X1", "X2", "Y1", "Y2"},
                    {nu, nv1, nv2, nx1, nx2, ny1, ny2}, std::move(table));
}

}  // namespace cmaccm
