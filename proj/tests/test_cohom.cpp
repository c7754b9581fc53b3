#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace qlef;
using qlef::testing::q;

namespace
{

CohClass h(const AmbientSpace &s, std::size_t i = 0)
{
    return CohClass::hyperplane(s, i);
}

} // namespace

TEST(Cohom, SquareOfHyperplaneVanishesOnP1)
{
    AmbientSpace p1({1});
    EXPECT_TRUE(ring_mul(h(p1), h(p1), p1).is_zero());
}

TEST(Cohom, ProductOfSquaresOnP4)
{
    AmbientSpace p4({4});
    EXPECT_EQ(ring_mul(h(p4).pow(2), h(p4).pow(2), p4), h(p4).pow(4));
    EXPECT_TRUE(h(p4).pow(5).is_zero());
}

TEST(Cohom, SquareOfSumOnP1xP1)
{
    AmbientSpace s({1, 1});
    const auto x = h(s, 0) + h(s, 1);
    EXPECT_EQ(x * x, h(s, 0) * h(s, 1) * q(2));
}

TEST(Cohom, RingMulRejectsDifferentSpaces)
{
    EXPECT_THROW(ring_mul(h(AmbientSpace({1})), h(AmbientSpace({2})), AmbientSpace({1})), MismatchError);
}

TEST(Cohom, Integrate)
{
    AmbientSpace p4({4});
    EXPECT_EQ(integrate(p4, h(p4).pow(4)), 1);
    EXPECT_EQ(integrate(p4, h(p4).pow(3)), 0);
    AmbientSpace s({1, 1});
    EXPECT_EQ(integrate(s, h(s, 0) * h(s, 1)), 1);
}

TEST(Cohom, EulerClasses)
{
    AmbientSpace p4({4});
    EXPECT_EQ(euler_class(p4, BundleSpec{{LineBundle{{5}}}}), h(p4) * q(5));
    AmbientSpace p1({1});
    EXPECT_TRUE(euler_class(p1, BundleSpec{{LineBundle{{-1}}, LineBundle{{-1}}}}).is_zero());
    AmbientSpace p3({3});
    EXPECT_EQ(euler_class(p3, BundleSpec{{LineBundle{{2}}, LineBundle{{3}}}}), h(p3).pow(2) * q(6));
    EXPECT_EQ(euler_class(p3, BundleSpec{}), CohClass::unit(p3));
}

TEST(Cohom, BundleValidation)
{
    AmbientSpace s({1, 1});
    EXPECT_THROW(validate_bundle(s, BundleSpec{{LineBundle{{0, 0}}}}), InvalidArgument);
    EXPECT_THROW(validate_bundle(s, BundleSpec{{LineBundle{{1}}}}), MismatchError);
    EXPECT_NO_THROW(validate_bundle(s, BundleSpec{{LineBundle{{1, 0}}}}));
}

TEST(Cohom, AmbientValidation)
{
    EXPECT_THROW(AmbientSpace(std::vector<int>{}), InvalidArgument);
    EXPECT_THROW(AmbientSpace({0}), InvalidArgument);
    EXPECT_THROW(AmbientSpace({2, -1}), InvalidArgument);
}

TEST(Cohom, GrlexBasisOrder)
{
    AmbientSpace s({1, 1});
    std::vector<std::vector<int>> seen;
    for (auto idx : s.basis_grlex()) {
        seen.push_back(s.exponent(idx));
    }
    const std::vector<std::vector<int>> expected{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    EXPECT_EQ(seen, expected);
}

TEST(Cohom, InverseAndNonInvertible)
{
    AmbientSpace p4({4});
    const auto x = CohClass::unit(p4) * q(3) + h(p4) * q(2, 7) - h(p4).pow(3);
    EXPECT_EQ(x * x.inverse(), CohClass::unit(p4));
    EXPECT_THROW((h(p4) * q(5)).inverse(), NonInvertible);
}

TEST(Cohom, CurveClassOrderingAndEnumeration)
{
    const auto classes = curve_classes_up_to(2, 2);
    ASSERT_EQ(classes.size(), 6U);
    EXPECT_EQ(classes.front(), CurveClass::zero(2));
    EXPECT_EQ(classes[1], CurveClass({0, 1}));
    EXPECT_EQ(classes.back(), CurveClass({2, 0}));
    EXPECT_EQ(CurveClass({1, 2}).to_string(), "(1,2)");
}

TEST(CohomProperty, RingLawsOnRandomClasses)
{
    std::mt19937_64 rng(101);
    int cases = 0;
    for (const auto &space : qlef::testing::sample_spaces()) {
        for (int trial = 0; trial < 6; ++trial) {
            const auto a = qlef::testing::random_class(space, rng);
            const auto b = qlef::testing::random_class(space, rng);
            const auto c = qlef::testing::random_class(space, rng);
            EXPECT_EQ(a * b, b * a);
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_EQ(a * CohClass::unit(space), a);
            ++cases;
        }
    }
    EXPECT_EQ(cases, 30);
}

TEST(CohomProperty, GramMatrixIsPermutation)
{
    for (const auto &space : qlef::testing::sample_spaces()) {
        const auto n = space.size();
        for (std::size_t i = 0; i < n; ++i) {
            int ones = 0;
            for (std::size_t j = 0; j < n; ++j) {
                const auto a = CohClass::monomial(space, space.exponent(i));
                const auto b = CohClass::monomial(space, space.exponent(j));
                const Rational v = integrate(space, a * b);
                EXPECT_EQ(v, integrate(space, b * a));
                EXPECT_TRUE(v == 0 || v == 1);
                ones += v == 1;
            }
            EXPECT_EQ(ones, 1) << "row " << i << " on " << space.size() << "-dimensional ring";
        }
    }
}

TEST(CohomProperty, EulerClassIsMultiplicative)
{
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> deg(-3, 4);
    for (const auto &space : qlef::testing::sample_spaces()) {
        for (int trial = 0; trial < 4; ++trial) {
            BundleSpec a;
            BundleSpec b;
            for (int j = 0; j < 2; ++j) {
                std::vector<int> la(space.num_factors());
                std::vector<int> lb(space.num_factors());
                for (auto &x : la) {
                    x = deg(rng);
                }
                for (auto &x : lb) {
                    x = deg(rng);
                }
                la[0] = la[0] == 0 ? 1 : la[0];
                lb[0] = lb[0] == 0 ? -1 : lb[0];
                a.lines.push_back(LineBundle{la});
                b.lines.push_back(LineBundle{lb});
            }
            EXPECT_EQ(euler_class(space, a + b), euler_class(space, a) * euler_class(space, b));
        }
    }
}
