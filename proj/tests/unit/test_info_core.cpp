#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cmaccm/aux_law.hpp"
#include "cmaccm/info.hpp"
#include "cmaccm/rng.hpp"
#include "support/oracles.hpp"
#include "support/test_channels.hpp"

using namespace cmaccm;
using Catch::Approx;

namespace {

// Frozen from high-precision evaluation of the binary entropy at 0.11.
constexpr double kH011 = 0.499915958164528;

JointPmf random_joint(const std::vector<std::size_t>& sizes, Rng& rng) {
    std::size_t total = 1;
    for (auto s : sizes) total *= s;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < sizes.size(); ++i) names.push_back("V" + std::to_string(i));
    return JointPmf(names, sizes, rng.dirichlet_uniform(total));
}

}  // namespace

TEST_CASE("entropy basics") {
    CHECK(entropy(Pmf({0.5, 0.5})) == Approx(1.0).margin(1e-12));
    CHECK(entropy(Pmf({1.0, 0.0})) == Approx(0.0).margin(1e-12));
    CHECK(entropy(Pmf({0.11, 0.89})) == Approx(kH011).margin(1e-5));
    // bounds
    CHECK(entropy(Pmf({0.25, 0.25, 0.25, 0.25})) == Approx(2.0).margin(1e-12));
}

TEST_CASE("pmf validation") {
    CHECK_THROWS_AS(Pmf({0.6, 0.6}), ValidationError);
    CHECK_THROWS_AS(Pmf({1.2, -0.2}), ValidationError);
    CHECK_THROWS_AS(Pmf({}), ValidationError);
    CHECK_NOTHROW(Pmf({0.3, 0.7}));
}

TEST_CASE("mutual information trivials") {
    // independent uniform bits
    JointPmf indep({"A", "B"}, {2, 2}, {0.25, 0.25, 0.25, 0.25});
    CHECK(mutual_information(indep, "A", "B") == Approx(0.0).margin(1e-12));

    // identity coupling
    JointPmf coupled({"A", "B"}, {2, 2}, {0.5, 0.0, 0.0, 0.5});
    CHECK(mutual_information(coupled, "A", "B") == Approx(1.0).margin(1e-12));

    CHECK_THROWS_AS(mutual_information(indep, "A", "Z"), UsageError);
    CHECK_THROWS_AS(mutual_information(indep, "A", "A"), UsageError);
}

TEST_CASE("binary symmetric pipe at crossover 0.11") {
    const double p = 0.11;
    // p(x,y) for uniform input through a BSC.
    JointPmf j({"X", "Y"}, {2, 2}, {0.5 * (1 - p), 0.5 * p, 0.5 * p, 0.5 * (1 - p)});
    CHECK(mutual_information(j, "X", "Y") == Approx(1.0 - kH011).margin(1e-5));
}

TEST_CASE("conditional mutual information trivials") {
    // C independent of (A,B), A = B uniform.
    std::vector<double> t(8, 0.0);
    // order (A,B,C), C fastest
    t[0 * 4 + 0 * 2 + 0] = 0.25;
    t[0 * 4 + 0 * 2 + 1] = 0.25;
    t[1 * 4 + 1 * 2 + 0] = 0.25;
    t[1 * 4 + 1 * 2 + 1] = 0.25;
    JointPmf j({"A", "B", "C"}, {2, 2, 2}, t);
    CHECK(conditional_mutual_information(j, "A", "B", "C") == Approx(1.0).margin(1e-12));

    // B identical to C: I(A;B|C) = 0.
    Rng rng(7);
    auto pa = rng.dirichlet_uniform(4);  // joint of (A,B) arbitrary
    std::vector<double> t2(8, 0.0);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) t2[a * 4 + b * 2 + b] = pa[a * 2 + b];
    JointPmf j2({"A", "B", "C"}, {2, 2, 2}, t2);
    CHECK(conditional_mutual_information(j2, "A", "B", "C") == Approx(0.0).margin(1e-12));
}

TEST_CASE("cmi matches a hand-specified 2x2x2 brute force") {
    // Hand-specified joint, deliberately lopsided.
    std::vector<double> t = {0.20, 0.05, 0.10, 0.05, 0.15, 0.05, 0.25, 0.15};
    JointPmf j({"A", "B", "C"}, {2, 2, 2}, t);
    const double direct = oracle::cmi_direct({{2, 2, 2}, t}, {0}, {1}, {2});
    CHECK(conditional_mutual_information(j, "A", "B", "C") == Approx(direct).margin(1e-9));
}

TEST_CASE("cmi equals the direct-sum oracle on the fixed battery") {
    Rng rng(12345);
    const std::vector<std::vector<std::size_t>> shapes = {
        {2, 2},       {3, 2},       {2, 2, 2},    {3, 3, 2},
        {2, 3, 3},    {2, 2, 2, 2}, {3, 2, 2, 3}, {3, 3, 3, 2},
    };
    for (const auto& sizes : shapes) {
        for (int rep = 0; rep < 8; ++rep) {
            JointPmf j = random_joint(sizes, rng);
            oracle::FlatJoint f{sizes, j.probs()};
            // a = V0, b = V1, c = the rest
            std::vector<std::string> c_labels;
            std::vector<std::size_t> c_idx;
            for (std::size_t v = 2; v < sizes.size(); ++v) {
                c_labels.push_back("V" + std::to_string(v));
                c_idx.push_back(v);
            }
            const double lib = group_mutual_information(j, {"V0"}, {"V1"}, c_labels);
            const double ref = oracle::cmi_direct(f, {0}, {1}, c_idx);
            CHECK(lib == Approx(ref).margin(1e-9));
        }
    }
}

TEST_CASE("mi symmetry on random joints") {
    Rng rng(99);
    for (int rep = 0; rep < 25; ++rep) {
        JointPmf j = random_joint({3, 3}, rng);
        CHECK(mutual_information(j, "V0", "V1") ==
              Approx(mutual_information(j, "V1", "V0")).margin(1e-12));
    }
}

TEST_CASE("chain rule on random 2x2x2 joints") {
    Rng rng(4242);
    for (int rep = 0; rep < 25; ++rep) {
        JointPmf j = random_joint({2, 2, 2}, rng);
        const double lhs = group_mutual_information(j, {"V0", "V1"}, {"V2"});
        const double rhs = group_mutual_information(j, {"V0"}, {"V2"}) +
                           group_mutual_information(j, {"V1"}, {"V2"}, {"V0"});
        CHECK(lhs == Approx(rhs).margin(1e-9));
    }
}

TEST_CASE("build_inner_law") {
    SECTION("degenerate law and deterministic channel give a unit cell") {
        InnerAuxLaw aux{Pmf::degenerate(2, 1), ConditionalPmf::identity(2),
                        ConditionalPmf::identity(2), ConditionalPmf::identity(2)};
        auto ch = testkit::noiseless_pair_channel();
        JointPmf j = build_inner_law(aux, ch);
        std::size_t nonzero = 0;
        double peak = 0.0;
        for (double p : j.probs())
            if (p > 0.0) {
                ++nonzero;
                peak = p;
            }
        CHECK(nonzero == 1);
        CHECK(peak == Approx(1.0).margin(1e-12));
    }

    SECTION("normalization") {
        auto ch = testkit::xor_wiretap_channel();
        InnerAuxLaw aux{Pmf({0.3, 0.7}), ConditionalPmf({Pmf({0.9, 0.1}), Pmf({0.2, 0.8})}),
                        ConditionalPmf({Pmf({0.6, 0.4}), Pmf({0.5, 0.5})}),
                        ConditionalPmf({Pmf({0.1, 0.9}), Pmf({0.7, 0.3})})};
        JointPmf j = build_inner_law(aux, ch);
        double sum = 0.0;
        for (double p : j.probs()) sum += p;
        CHECK(sum == Approx(1.0).margin(1e-9));
    }

    SECTION("cell-by-cell product oracle") {
        // binary everything, identity chains, channel with independent
        // uniform outputs
        auto ch = testkit::useless_channel();
        InnerAuxLaw aux{Pmf::uniform(2), ConditionalPmf::identity(2), ConditionalPmf::identity(2),
                        ConditionalPmf::identity(2)};
        JointPmf j = build_inner_law(aux, ch);
        for (std::size_t u = 0; u < 2; ++u)
            for (std::size_t v1 = 0; v1 < 2; ++v1)
                for (std::size_t x1 = 0; x1 < 2; ++x1)
                    for (std::size_t x2 = 0; x2 < 2; ++x2)
                        for (std::size_t y1 = 0; y1 < 2; ++y1)
                            for (std::size_t y2 = 0; y2 < 2; ++y2) {
                                const double expect = aux.p_u[u] *
                                                      aux.p_v1_given_u.prob(u, v1) *
                                                      aux.p_x1_given_v1.prob(v1, x1) *
                                                      aux.p_x2_given_u.prob(u, x2) *
                                                      ch.prob(x1, x2, y1, y2);
                                CHECK(j.prob({u, v1, x1, x2, y1, y2}) ==
                                      Approx(expect).margin(1e-12));
                            }
    }

    SECTION("dimension mismatch rejected") {
        auto ch = testkit::xor_wiretap_channel();
        InnerAuxLaw bad{Pmf::uniform(2), ConditionalPmf::identity(2),
                        ConditionalPmf({Pmf({0.5, 0.25, 0.25})}), ConditionalPmf::identity(2)};
        CHECK_THROWS_AS(build_inner_law(bad, ch), ValidationError);
    }
}

TEST_CASE("build_outer_law") {
    auto ch = testkit::xor_wiretap_channel();

    SECTION("degenerate aux gives unit cell") {
        OuterAuxLaw aux{Pmf({1.0}), 1, 1, ConditionalPmf({Pmf({1.0})}),
                        ConditionalPmf({Pmf({0.0, 1.0})}), ConditionalPmf({Pmf({1.0, 0.0})})};
        auto chd = testkit::noiseless_pair_channel();
        JointPmf j = build_outer_law(aux, chd);
        std::size_t nonzero = 0;
        for (double p : j.probs())
            if (p > 1e-15) ++nonzero;
        CHECK(nonzero == 1);
    }

    SECTION("correlated (V1,V2) given U matches product oracle") {
        // p(v1,v2|u) rows indexed v2*|V1|+v1 (v1 fastest)
        ConditionalPmf pv({Pmf({0.4, 0.1, 0.1, 0.4}), Pmf({0.05, 0.45, 0.45, 0.05})});
        OuterAuxLaw aux{Pmf({0.6, 0.4}), 2, 2, pv,
                        ConditionalPmf({Pmf({0.8, 0.2}), Pmf({0.3, 0.7})}),
                        ConditionalPmf({Pmf({0.9, 0.1}), Pmf({0.25, 0.75})})};
        JointPmf j = build_outer_law(aux, ch);
        double sum = 0.0;
        for (double p : j.probs()) sum += p;
        CHECK(sum == Approx(1.0).margin(1e-9));
        for (std::size_t u = 0; u < 2; ++u)
            for (std::size_t v1 = 0; v1 < 2; ++v1)
                for (std::size_t v2 = 0; v2 < 2; ++v2)
                    for (std::size_t x1 = 0; x1 < 2; ++x1)
                        for (std::size_t x2 = 0; x2 < 2; ++x2)
                            for (std::size_t y1 = 0; y1 < 2; ++y1)
                                for (std::size_t y2 = 0; y2 < 2; ++y2) {
                                    const double expect =
                                        aux.p_u[u] * aux.p_v1v2(u, v1, v2) *
                                        aux.p_x1_given_v1.prob(v1, x1) *
                                        aux.p_x2_given_v2.prob(v2, x2) *
                                        ch.prob(x1, x2, y1, y2);
                                    CHECK(j.prob({u, v1, v2, x1, x2, y1, y2}) ==
                                          Approx(expect).margin(1e-12));
                                }
    }
}

TEST_CASE("marginalize") {
    Rng rng(5);
    JointPmf j = random_joint({2, 3, 2}, rng);

    SECTION("keeping all labels is the identity") {
        JointPmf m = j.marginalize({"V0", "V1", "V2"});
        for (std::size_t i = 0; i < j.probs().size(); ++i)
            CHECK(m.probs()[i] == Approx(j.probs()[i]).margin(1e-15));
    }

    SECTION("keeping one factor of a product law recovers it") {
        JointPmf prod({"A", "B"}, {2, 2}, {0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.6, 0.7 * 0.4});
        JointPmf m = prod.marginalize({"A"});
        CHECK(m.probs()[0] == Approx(0.3).margin(1e-12));
        CHECK(m.probs()[1] == Approx(0.7).margin(1e-12));
    }

    SECTION("(Y1,Y2) marginal of a built law matches the forward-channel sum") {
        auto ch = testkit::xor_wiretap_channel();
        InnerAuxLaw aux{Pmf({0.25, 0.75}), ConditionalPmf({Pmf({0.9, 0.1}), Pmf({0.4, 0.6})}),
                        ConditionalPmf({Pmf({0.7, 0.3}), Pmf({0.2, 0.8})}),
                        ConditionalPmf({Pmf({0.5, 0.5}), Pmf({0.15, 0.85})})};
        JointPmf full = build_inner_law(aux, ch);
        JointPmf m = full.marginalize({"Y1", "Y2"});
        // forward sum: p(x1,x2) then the channel
        JointPmf pin = full.marginalize({"X1", "X2"});
        for (std::size_t y1 = 0; y1 < 2; ++y1)
            for (std::size_t y2 = 0; y2 < 2; ++y2) {
                double expect = 0.0;
                for (std::size_t x1 = 0; x1 < 2; ++x1)
                    for (std::size_t x2 = 0; x2 < 2; ++x2)
                        expect += pin.prob({x1, x2}) * ch.prob(x1, x2, y1, y2);
                CHECK(m.prob({y1, y2}) == Approx(expect).margin(1e-12));
            }
    }

    SECTION("unknown label is a usage error") {
        CHECK_THROWS_AS(j.marginalize({"nope"}), UsageError);
        CHECK_THROWS_AS(j.marginalize({}), UsageError);
    }
}

TEST_CASE("data processing on a built inner law") {
    auto ch = testkit::xor_wiretap_channel();
    Rng rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        auto cond = [&](std::size_t rows) {
            std::vector<Pmf> rs;
            for (std::size_t r = 0; r < rows; ++r) rs.push_back(Pmf(rng.dirichlet_uniform(2)));
            return ConditionalPmf(std::move(rs));
        };
        InnerAuxLaw aux{Pmf(rng.dirichlet_uniform(2)), cond(2), cond(2), cond(2)};
        JointPmf j = build_inner_law(aux, ch);
        const double lhs = group_mutual_information(j, {"U"}, {"Y1"});
        const double rhs = group_mutual_information(j, {"V1", "X2", "U"}, {"Y1"});
        CHECK(lhs <= rhs + 1e-9);
    }
}

TEST_CASE("every built joint is normalized with non-negative cells") {
    auto ch = testkit::committed_test_channel();
    Rng rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        auto cond = [&](std::size_t rows, std::size_t dim) {
            std::vector<Pmf> rs;
            for (std::size_t r = 0; r < rows; ++r) rs.push_back(Pmf(rng.dirichlet_uniform(dim)));
            return ConditionalPmf(std::move(rs));
        };
        OuterAuxLaw aux{Pmf(rng.dirichlet_uniform(2)), 2, 2, cond(2, 4), cond(2, 2), cond(2, 2)};
        JointPmf j = build_outer_law(aux, ch);
        double sum = 0.0;
        for (double p : j.probs()) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(sum == Approx(1.0).margin(1e-9));
    }
}
