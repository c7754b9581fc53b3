#include <gtest/gtest.h>

#include <algorithm>
#include <iostream>

#include "test_support.hpp"

using namespace qlef;
using qlef::testing::geometry;
using qlef::testing::q;

namespace
{

oracle::TorusWeights weights(std::vector<long> w)
{
    oracle::TorusWeights tw;
    for (long x : w) {
        tw.w.emplace_back(x);
    }
    return tw;
}

// 1, 2, 4, ...: no weight is the midpoint of two others.
oracle::TorusWeights powers_of_two(int r)
{
    std::vector<long> w;
    for (int i = 0; i <= r; ++i) {
        w.push_back(1L << i);
    }
    return weights(w);
}

int virtual_dimension(int r, int d, const BundleSpec &bundle)
{
    int dim = (r + 1) * d + r - 2;
    for (const auto &line : bundle.lines) {
        const int l = line.l[0];
        dim -= l > 0 ? l * d + 1 : -l * d - 1;
    }
    return dim;
}

} // namespace

TEST(Oracle, GraphEnumeration)
{
    const auto d1 = oracle::enumerate_graphs(1, 1);
    ASSERT_EQ(d1.size(), 2U);
    for (const auto &g : d1) {
        EXPECT_EQ(g.automorphisms, 1);
        EXPECT_EQ(g.total_degree(), 1);
    }
    int single_edge = 0;
    for (const auto &g : oracle::enumerate_graphs(3, 2)) {
        EXPECT_EQ(g.total_degree(), 2);
        for (const auto &e : g.edges) {
            EXPECT_NE(g.labels[static_cast<std::size_t>(e.u)], g.labels[static_cast<std::size_t>(e.v)]);
        }
        if (g.edges.size() == 1) {
            EXPECT_EQ(g.automorphisms, 2);
            ++single_edge;
        }
    }
    EXPECT_EQ(single_edge, 12);
    EXPECT_THROW(oracle::enumerate_graphs(1, 3), DegreeOutOfScope);
}

TEST(Oracle, OneLineThroughAPoint)
{
    EXPECT_EQ(oracle::localized_invariant(1, 1, BundleSpec{}, 0, 1, weights({3, 8})), 1);
}

TEST(Oracle, QuinticLines)
{
    EXPECT_EQ(oracle::localized_invariant(4, 1, BundleSpec{{LineBundle{{5}}}}, 0, 1, weights({1, 4, 9, 16, 25})), 2875);
}

TEST(Oracle, LocalP1DoubleCover)
{
    EXPECT_EQ(oracle::oracle_n_number(1, 2, qlef::testing::local_p1().bundle, 17).value, q(1, 8));
}

TEST(Oracle, Errors)
{
    EXPECT_THROW(oracle::localized_invariant(2, 1, BundleSpec{}, 0, 2, weights({1, 1, 2})), WeightCollision);
    EXPECT_THROW(oracle::localized_invariant(2, 1, BundleSpec{}, 0, 2, weights({1, 2})), MismatchError);
    EXPECT_THROW(oracle::localized_invariant(2, 3, BundleSpec{}, 0, 2, weights({1, 2, 3})), DegreeOutOfScope);
    EXPECT_THROW(oracle::localized_invariant(1, 1, BundleSpec{{LineBundle{{1, 1}}}}, 0, 1, weights({1, 2})),
                 MismatchError);
}

TEST(OracleProperty, WeightIndependence)
{
    std::mt19937_64 rng(808);
    const std::vector<std::pair<int, BundleSpec>> cases{
        {4, BundleSpec{{LineBundle{{5}}}}},
        {1, qlef::testing::local_p1().bundle},
        {3, BundleSpec{{LineBundle{{1}}, LineBundle{{1}}}}},
        {5, BundleSpec{{LineBundle{{-1}}, LineBundle{{-5}}}}},
        {2, BundleSpec{}},
    };
    int checks = 0;
    for (const auto &[r, bundle] : cases) {
        for (int d = 1; d <= 2; ++d) {
            const int vd = virtual_dimension(r, d, bundle);
            for (int b = 0; b <= std::min(r, vd); ++b) {
                const int a = vd - b;
                const Rational reference = oracle::localized_invariant(r, d, bundle, a, b, powers_of_two(r));
                for (int trial = 0; trial < 5; ++trial) {
                    EXPECT_EQ(oracle::localized_invariant_seeded(r, d, bundle, a, b, rng()).value, reference)
                        << "r=" << r << " d=" << d << " a=" << a << " b=" << b;
                    ++checks;
                }
            }
        }
    }
    std::cout << "weight-independence checks: " << checks << "\n";
    EXPECT_GE(checks, 50);
}

TEST(OracleProperty, PermutationEquivariance)
{
    std::mt19937_64 rng(909);
    const BundleSpec quintic{{LineBundle{{5}}}};
    for (int trial = 0; trial < 5; ++trial) {
        const auto run = oracle::localized_invariant_seeded(4, 2, quintic, 0, 1, rng());
        auto w = run.weights;
        const Rational base = run.value;
        std::shuffle(w.w.begin(), w.w.end(), rng);
        EXPECT_EQ(oracle::localized_invariant(4, 2, quintic, 0, 1, w), base);
    }
}

TEST(OracleProperty, SeededRunsAreReproducible)
{
    const BundleSpec quintic{{LineBundle{{5}}}};
    const auto a = oracle::oracle_n_number(4, 2, quintic, 42);
    const auto b = oracle::oracle_n_number(4, 2, quintic, 42);
    EXPECT_EQ(a.weights.w, b.weights.w);
    EXPECT_EQ(a.value, b.value);
    std::cout << "seed 42 weights:";
    for (const auto &x : a.weights.to_strings()) {
        std::cout << " " << x;
    }
    std::cout << "\n";
}

// Every one-point descendant in the virtual dimension agrees with the pipeline.
TEST(OracleProperty, AgreesWithPipelineDescendants)
{
    for (const auto &g : {qlef::testing::quintic(), geometry({4}, {{1}}), geometry({3}, {{1}, {1}}),
                          qlef::testing::local_p1(), geometry({5}, {{-1}, {-5}}), geometry({5}, {{3}, {3}}),
                          geometry({5}, {{2}, {4}}), geometry({3}, {})}) {
        const int r = g.ambient.dim(0);
        const auto res = run_pipeline(g, 2);
        const auto h = CohClass::hyperplane(g.ambient, 0);
        for (int d = 1; d <= 2; ++d) {
            const auto term = res.j_series.coeff(CurveClass({d}));
            const int vd = virtual_dimension(r, d, g.bundle);
            for (int b = 0; b <= std::min(r, vd); ++b) {
                const int a = vd - b;
                const Rational pipeline = integrate(g.ambient, term.coeff(-2 - a) * h.pow(static_cast<unsigned>(b)));
                const Rational localized = oracle::localized_invariant_seeded(r, d, g.bundle, a, b, 5).value;
                EXPECT_EQ(pipeline, localized) << "r=" << r << " d=" << d << " a=" << a << " b=" << b;
            }
        }
    }
}
