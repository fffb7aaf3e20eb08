#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cmaccm/gaussian.hpp"
#include "cmaccm/rng.hpp"

using namespace cmaccm;
using Catch::Approx;

namespace {

// Frozen from high-precision evaluation of C(x) = 0.5*log2(1+x).
constexpr double kC01 = 0.0687517618749675;   // C(0.1)
constexpr double kC04 = 0.242713413585121;    // C(0.4)
constexpr double kC05 = 0.292481250360578;    // C(0.5)
constexpr double kC06 = 0.339035952556319;    // C(0.6)
constexpr double kC09 = 0.462999709278112;    // C(0.9)
constexpr double kC12 = 0.568751761874967;    // C(1.2)
constexpr double kC05over14 = 0.220286295692991;   // C(0.5/1.4)
constexpr double kR1Fig3 = 0.0963225389711979;     // C(0.6) - C(0.4)
constexpr double kR1Fig4 = 0.270284190681351;      // C(0.6) - C(0.1)
constexpr double kSumFig3 = 0.326038348289847;     // C(1.2) - C(0.4)
constexpr double kR0Fig3 = 0.741276292984023;      // C(0.9 + 2*sqrt(0.2))

const GaussianParams kFig3{0.6, 0.6, 0.4, 0.5, 1.0, 1.0};
const GaussianParams kFig4{0.6, 0.6, 0.1, 0.5, 1.0, 1.0};
const PowerSplit kFullPrivate{0.0, 1.0, 0.0, 1.0};

}  // namespace

TEST_CASE("c_fn") {
    CHECK(c_fn(0.0) == Approx(0.0).margin(1e-15));
    CHECK(c_fn(1.0) == Approx(0.5).margin(1e-12));
    CHECK(c_fn(0.6) == Approx(kC06).margin(1e-6));
    CHECK_THROWS_AS(c_fn(-0.1), DomainError);

    SECTION("monotone on a random battery") {
        Rng rng(17);
        for (int i = 0; i < 200; ++i) {
            const double a = 10.0 * rng.next_double();
            const double b = 10.0 * rng.next_double();
            const double lo = std::min(a, b), hi = std::max(a, b);
            CHECK(c_fn(lo) <= c_fn(hi));
        }
    }
}

TEST_CASE("theorem-5 constraints at the full-private split of the fig3 params") {
    const ConstraintSet cs = cmaccm_inner_constraints(kFig3, kFullPrivate);
    CHECK(cs.provenance() == "thm5");
    CHECK(cs.bound_for({0, 1, 0}) == Approx(kR1Fig3).margin(1e-5));
    CHECK(cs.bound_for({0, 0, 1}) == Approx(kC05over14).margin(1e-5));  // min{0.339036, 0.220287}
    CHECK(cs.bound_for({1, 0, 1}) == Approx(kC05over14).margin(1e-5));
    CHECK(cs.bound_for({0, 1, 1}) == Approx(kSumFig3).margin(1e-5));
    CHECK(cs.bound_for({1, 1, 1}) == Approx(kSumFig3).margin(1e-5));
}

TEST_CASE("theorem-5 degenerate cases") {
    SECTION("zero power everywhere gives all-zero bounds") {
        GaussianParams gp{0.6, 0.6, 0.4, 0.5, 0.0, 0.0};
        PowerSplit zero{0, 0, 0, 0};
        for (const auto& c : cmaccm_inner_constraints(gp, zero).rows())
            CHECK(c.bound == Approx(0.0).margin(1e-15));
    }

    SECTION("g1 == h1 makes the R1 bound exactly zero") {
        GaussianParams gp{0.6, 0.6, 0.6, 0.5, 1.0, 1.0};
        for (double pu : {0.0, 0.3, 1.0}) {
            PowerSplit ps{0.0, pu, 0.0, 1.0};
            CHECK(cmaccm_inner_constraints(gp, ps).bound_for({0, 1, 0}) == 0.0);
        }
    }

    SECTION("budget violation rejected") {
        PowerSplit bad{0.6, 0.6, 0.0, 1.0};
        CHECK_THROWS_AS(cmaccm_inner_constraints(kFig3, bad), ValidationError);
    }
}

TEST_CASE("theorem-6 constraints at the full-private split of the fig3 params") {
    const ConstraintSet cs = compound_capacity_constraints(kFig3, kFullPrivate);
    CHECK(cs.provenance() == "thm6");
    CHECK(cs.bound_for({0, 1, 0}) == Approx(kC04).margin(1e-5));
    CHECK(cs.bound_for({0, 0, 1}) == Approx(kC05).margin(1e-5));
    // min{C(1.2), C(0.9)} = C(0.9). Frozen to the oracle value; the number
    // is what the closed form evaluates to.
    CHECK(cs.bound_for({0, 1, 1}) == Approx(kC09).margin(1e-5));
    CHECK(cs.bound_for({1, 1, 1}) == Approx(kC09).margin(1e-5));
    // no standalone R0 row
    CHECK(cs.rows().size() == 4);
    CHECK_THROWS_AS(cs.bound_for({1, 0, 0}), UsageError);
}

TEST_CASE("theorem-6 symmetric gains collapse the mins") {
    GaussianParams gp{0.7, 0.3, 0.7, 0.3, 1.0, 1.0};
    PowerSplit ps{0.4, 0.6, 0.2, 0.8};
    const ConstraintSet cs = compound_capacity_constraints(gp, ps);
    CHECK(cs.bound_for({0, 1, 0}) == Approx(c_fn(0.7 * 0.6)).margin(1e-12));
    CHECK(cs.bound_for({0, 0, 1}) == Approx(c_fn(0.3 * 0.8)).margin(1e-12));
}

TEST_CASE("sweep_gaussian") {
    SECTION("zero budgets give the origin only") {
        GaussianParams gp{0.6, 0.6, 0.4, 0.5, 0.0, 0.0};
        auto cloud = sweep_gaussian(gp, {2, GaussianMode::CmacCmInner});
        REQUIRE(cloud.points.size() == 1);
        CHECK(cloud.points[0] == RateTuple{0, 0, 0});
    }

    SECTION("fig3 cmaccm max r2 at steps 11") {
        auto cloud = sweep_gaussian(kFig3, {11, GaussianMode::CmacCmInner});
        double max_r2 = 0.0;
        RateTuple arg{0, 0, 0};
        for (const auto& p : cloud.points)
            if (p.r2 > max_r2) {
                max_r2 = p.r2;
                arg = p;
            }
        CHECK(max_r2 == Approx(kC05).margin(1e-5));
    }

    SECTION("fig3 compound max r1 exceeds cmaccm max r1") {
        auto inner = sweep_gaussian(kFig3, {11, GaussianMode::CmacCmInner});
        auto comp = sweep_gaussian(kFig3, {11, GaussianMode::CompoundCapacity});
        CHECK(axis_maxima(comp)[1] == Approx(kC04).margin(1e-5));
        CHECK(axis_maxima(inner)[1] == Approx(kR1Fig3).margin(1e-5));
        CHECK(axis_maxima(comp)[1] > axis_maxima(inner)[1]);
    }

    SECTION("steps below 2 rejected") {
        CHECK_THROWS_AS(sweep_gaussian(kFig3, {1, GaussianMode::CmacCmInner}), UsageError);
    }
}

TEST_CASE("max_rate closed forms") {
    CHECK(max_rate(kFig3, GaussianMode::CmacCmInner, RateAxis::R1) ==
          Approx(kR1Fig3).margin(1e-6));
    CHECK(max_rate(kFig4, GaussianMode::CmacCmInner, RateAxis::R1) ==
          Approx(kR1Fig4).margin(1e-6));
    CHECK(max_rate(kFig4, GaussianMode::CompoundCapacity, RateAxis::R1) ==
          Approx(kC01).margin(1e-6));
    CHECK(max_rate(kFig3, GaussianMode::CmacCmInner, RateAxis::R0) ==
          Approx(kR0Fig3).margin(1e-6));

    SECTION("cross-check against a fine sweep") {
        for (auto mode : {GaussianMode::CmacCmInner, GaussianMode::CompoundCapacity}) {
            auto cloud = sweep_gaussian(kFig3, {41, mode});
            const auto mx = axis_maxima(cloud);
            for (auto axis : {RateAxis::R0, RateAxis::R1, RateAxis::R2})
                CHECK(mx[static_cast<std::size_t>(axis)] ==
                      Approx(max_rate(kFig3, mode, axis)).margin(1e-9));
        }
    }
}

TEST_CASE("R1 clamp: g1 >= h1 zeroes the secrecy rate everywhere") {
    Rng rng(271828);
    for (int rep = 0; rep < 100; ++rep) {
        GaussianParams gp;
        gp.h1 = 2.0 * rng.next_double();
        gp.g1 = gp.h1 + 2.0 * rng.next_double();  // g1 >= h1
        gp.h2 = 2.0 * rng.next_double();
        gp.g2 = 2.0 * rng.next_double();
        gp.p1 = 2.0 * rng.next_double();
        gp.p2 = 2.0 * rng.next_double();
        const double a = gp.p1 * rng.next_double();
        const double b = gp.p2 * rng.next_double();
        PowerSplit ps{gp.p1 - a, a, gp.p2 - b, b};
        CHECK(cmaccm_inner_constraints(gp, ps).bound_for({0, 1, 0}) == 0.0);
        CHECK(max_rate(gp, GaussianMode::CmacCmInner, RateAxis::R1) == 0.0);
    }
}

TEST_CASE("all theorem-5/6 bounds are finite and non-negative on random draws") {
    Rng rng(314159);
    for (int rep = 0; rep < 100; ++rep) {
        GaussianParams gp{4.0 * rng.next_double(), 4.0 * rng.next_double(),
                          4.0 * rng.next_double(), 4.0 * rng.next_double(),
                          3.0 * rng.next_double(), 3.0 * rng.next_double()};
        const double a = gp.p1 * rng.next_double();
        const double b = gp.p2 * rng.next_double();
        PowerSplit ps{gp.p1 - a, a, gp.p2 - b, b};
        for (const auto& c : cmaccm_inner_constraints(gp, ps).rows()) {
            CHECK(std::isfinite(c.bound));
            CHECK(c.bound >= 0.0);
        }
        for (const auto& c : compound_capacity_constraints(gp, ps).rows()) {
            CHECK(std::isfinite(c.bound));
            CHECK(c.bound >= 0.0);
        }
    }
}

TEST_CASE("monotone refinement: steps-grid cloud sits inside the 2*steps-1 cloud") {
    for (auto mode : {GaussianMode::CmacCmInner, GaussianMode::CompoundCapacity}) {
        auto coarse = sweep_gaussian(kFig3, {6, mode});
        auto fine = sweep_gaussian(kFig3, {11, mode});  // 2*6 - 1, grids nest
        for (const auto& p : coarse.points) {
            bool present = false;
            for (const auto& q : fine.points)
                if (std::abs(p.r0 - q.r0) <= 1e-9 && std::abs(p.r1 - q.r1) <= 1e-9 &&
                    std::abs(p.r2 - q.r2) <= 1e-9) {
                    present = true;
                    break;
                }
            CHECK(present);
        }
    }
}

TEST_CASE("fig3 parity invariants") {
    auto inner = sweep_gaussian(kFig3, {21, GaussianMode::CmacCmInner});
    auto comp = sweep_gaussian(kFig3, {21, GaussianMode::CompoundCapacity});
    const auto mi = axis_maxima(inner);
    const auto mc = axis_maxima(comp);
    SECTION("R2 maxima agree") { CHECK(mi[2] == Approx(mc[2]).margin(1e-6)); }
    SECTION("R0 maxima agree") { CHECK(mi[0] == Approx(mc[0]).margin(1e-6)); }
}

TEST_CASE("fig4 dominance witness") {
    auto inner = convex_closure(sweep_gaussian(kFig4, {21, GaussianMode::CmacCmInner}));
    auto comp = convex_closure(sweep_gaussian(kFig4, {21, GaussianMode::CompoundCapacity}));
    const RateTuple witness{0.0, 0.27, 0.0};
    CHECK(contains(inner, witness, 1e-6));
    CHECK_FALSE(contains(comp, witness, 1e-6));
}
