#include "conex/conex.hpp"
#include "membership_oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace conex;

namespace {

CoefficientElement cosm(int b) { return CoefficientElement::cos_mode(detail::circle_chart(), 0, b); }

ConeFunction term(int a, int b, const std::string& q = "1")
{
    return ConeFunction::parse({std::to_string(a) + ":" + std::to_string(b) + ":" + q});
}

/** t^a sin(b phi) as a cone function. */
ConeFunction sine_term(int a, int b)
{
    ConeFunction f;
    f.add_term(a, b, GaussianRational(Rational(0), ratio(-1, 2)));
    f.add_term(a, -b, GaussianRational(Rational(0), ratio(1, 2)));
    return f;
}

std::map<int, GaussianRational> modes_of(const ConeFunction& f, int a)
{
    std::map<int, GaussianRational> m;
    for (const auto& [k, c] : f.terms())
    {
        if (k.first == a)
            m[k.second] += c;
    }
    return m;
}

}   // namespace

TEST(ConeFunction, ParsesTermsWithConjugates)
{
    const auto f = ConeFunction::parse({"3:2:1/2", "1:0:-4"});
    EXPECT_TRUE(f.is_real());
    EXPECT_EQ(f.terms().size(), 3u);
    EXPECT_EQ(f.terms().at({3, 2}), GaussianRational(ratio(1, 2)));
    EXPECT_EQ(f.terms().at({3, -2}), GaussianRational(ratio(1, 2)));
    EXPECT_THROW(ConeFunction::parse({"-1:0:1"}), std::invalid_argument);
    EXPECT_THROW(ConeFunction::parse({"1:0"}), std::invalid_argument);
    EXPECT_THROW(ConeFunction::parse({"1:0:1/0"}), std::invalid_argument);
    EXPECT_THROW(ConeFunction::parse({"a:0:1"}), std::invalid_argument);
}

TEST(Membership, RadialFunctionDependsOnLatitude)
{
    const auto t = term(1, 0);
    EXPECT_TRUE(membership(t, ratio(1, 2)));
    EXPECT_FALSE(membership(t, 0));
    EXPECT_TRUE(membership(term(2, 0), 0));
    EXPECT_TRUE(membership(term(2, 0), ratio(1, 2)));
    EXPECT_FALSE(membership(term(3, 2), 0));
    EXPECT_TRUE(membership(term(3, 2), ratio(1, 2)));
    EXPECT_FALSE(membership(term(1, 2), ratio(1, 2)));
}

TEST(Membership, ViaEuclideanStructure)
{
    const auto e = euclidean_structure(ConeSpace(latitude_circle(ratio(1, 2))));
    EXPECT_EQ(e.generators.size(), 3u);
    EXPECT_TRUE(membership(term(1, 0), e));
    const auto eq = euclidean_structure(ConeSpace(latitude_circle(0)));
    EXPECT_FALSE(membership(term(1, 0), eq));
    EXPECT_THROW(membership(term(1, 0), euclidean_structure(ConeSpace(flat_circle()))), std::invalid_argument);
}

TEST(Membership, AgreesWithGeneratorSpanOracle)
{
    for (const Rational theta : {Rational(0), ratio(1, 2)})
    {
        const oracle::GeneratorSpan span(sgn(theta) != 0, 8, 10);
        for (int a = 0; a <= 8; ++a)
        {
            for (int b = 0; b <= 10; ++b)
            {
                const auto c = term(a, b);
                EXPECT_EQ(membership(c, theta), span.contains(a, modes_of(c, a)))
                    << "theta=" << theta << " a=" << a << " b=" << b;
                if (b > 0)
                {
                    const auto s = sine_term(a, b);
                    EXPECT_EQ(membership(s, theta), span.contains(a, modes_of(s, a)))
                        << "sine theta=" << theta << " a=" << a << " b=" << b;
                }
            }
        }
    }
}

TEST(Membership, ClosedUnderSumsAndProducts)
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> deg(0, 4);
    for (const Rational theta : {Rational(0), ratio(1, 2)})
    {
        std::vector<ConeFunction> accepted;
        while (accepted.size() < 30)
        {
            const int a = deg(rng);
            std::uniform_int_distribution<int> mode(0, a);
            ConeFunction f = term(a, mode(rng));
            f = f + term(deg(rng), 0, "3/2");
            if (membership(f, theta))
                accepted.push_back(f);
        }
        for (std::size_t i = 0; i + 1 < accepted.size(); ++i)
        {
            EXPECT_TRUE(membership(accepted[i] * accepted[i + 1], theta));
            EXPECT_TRUE(membership(accepted[i] + accepted[i + 1], theta));
        }
    }
}

TEST(WConeMembership, ConstantAtApex)
{
    const auto c = wcone_chart();
    const auto x = CoefficientElement::variable(c, 0);
    const auto t = CoefficientElement::variable(c, 1);
    EXPECT_TRUE(wcone_membership(t * x + CoefficientElement::constant(c, Rational(5))));
    EXPECT_FALSE(wcone_membership(x));
    EXPECT_TRUE(wcone_membership(t * t * x * x + t));
    EXPECT_TRUE(wcone_membership(CoefficientElement::zero(c)));
    EXPECT_THROW(wcone_membership(CoefficientElement::variable(symplectic_cartesian_chart(1), 0)), std::invalid_argument);
}

TEST(TangentCone, DirectionsLieOnTheLink)
{
    const ConeSpace cone(latitude_circle(ratio(1, 2)));
    const auto tc = tangent_cone(cone, 64);
    ASSERT_EQ(tc.generators.size(), 64u);
    for (const auto& v : tc.generators)
    {
        EXPECT_NEAR(v[2], 0.5, 1e-15);
        EXPECT_NEAR(v[0] * v[0] + v[1] * v[1] + v[2] * v[2], 1.0, 1e-14);
    }
    EXPECT_TRUE(tc.flat_pairs.empty());
}

TEST(Flatness, KnownLinks)
{
    EXPECT_EQ(degree_of_flatness(tangent_cone(ConeSpace(latitude_circle(ratio(1, 2))))), 0u);
    const auto equator = tangent_cone(ConeSpace(latitude_circle(0)));
    EXPECT_TRUE(equator.flat.whole_circle);
    EXPECT_EQ(degree_of_flatness(equator), 1u);
    const auto quartic = tangent_cone(ConeSpace(perturbed_circle(cosm(2) * ratio(1, 4))));
    EXPECT_EQ(degree_of_flatness(quartic), 4u);
    ASSERT_EQ(quartic.flat_pairs.size(), 2u);
    for (const auto& [p, q] : quartic.flat_pairs)
    {
        EXPECT_NEAR(q - p, std::numbers::pi, 1e-12);
        const auto a = quartic.link.point(p);
        const auto b = quartic.link.point(q);
        for (int i = 0; i < 3; ++i)
            EXPECT_NEAR(a[i], -b[i], 1e-8);
    }
    EXPECT_EQ(degree_of_flatness(tangent_cone(ConeSpace(flat_circle()))), 1u);
    EXPECT_EQ(degree_of_flatness(tangent_cone(ConeSpace(quadric_link(1)))), 1u);
}

TEST(Flatness, ConstructedLinksHavePrescribedPairs)
{
    for (int k = 0; k <= 6; ++k)
    {
        const auto link = construct_flatness_link(k);
        const auto tc = tangent_cone(ConeSpace(link));
        EXPECT_EQ(degree_of_flatness(tc), static_cast<std::size_t>(2 * k)) << link.name();
        EXPECT_EQ(tc.flat_pairs.size(), static_cast<std::size_t>(k));
    }
    EXPECT_EQ(construct_flatness_link(2).coordinates()[2].factor, cosm(2) * ratio(1, 4));
    EXPECT_THROW(construct_flatness_link(-1), std::invalid_argument);
}

TEST(Flatness, OddProfileWithoutEvenModesIsEverywhereFlat)
{
    // z = cos(phi) / 3 is odd under phi -> phi + pi, so L = -L.
    const auto tc = tangent_cone(ConeSpace(perturbed_circle(cosm(1) * ratio(1, 3))));
    EXPECT_TRUE(tc.flat.whole_circle);
}

TEST(NashCone, LatitudeHalfAgainstAnalyticCone)
{
    // Limit planes of cL(z = 1/2) sweep out {sqrt(3) |v3| <= |v_xy|}.
    const ConeSpace cone(latitude_circle(ratio(1, 2)));
    EXPECT_FALSE(nash_cone_membership(cone, {0, 0, 1}).member);
    const double r = std::sqrt(3.0) / 2;
    for (double phi : {0.0, 1.0, 2.0, 4.0})
    {
        EXPECT_TRUE(nash_cone_membership(cone, {r * std::cos(phi), r * std::sin(phi), 0.5}).member);
        EXPECT_TRUE(nash_cone_membership(cone, {-std::sin(phi), std::cos(phi), 0}).member);
    }
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0, 1);
    int checked = 0;
    while (checked < 40)
    {
        const std::array<double, 3> v{n(rng), n(rng), n(rng)};
        const double margin = std::hypot(v[0], v[1]) - std::sqrt(3.0) * std::abs(v[2]);
        if (std::abs(margin) < 1e-3)
            continue;
        EXPECT_EQ(nash_cone_membership(cone, v).member, margin > 0);
        ++checked;
    }
    EXPECT_THROW(nash_cone_membership(cone, {1, 0, 0}, 0.0), std::invalid_argument);
    EXPECT_THROW(nash_cone_membership(ConeSpace(flat_circle()), {1, 0, 0}), std::invalid_argument);
}

TEST(Bump, ProfileProperties)
{
    const auto f = bump_on_cone(0.5);
    EXPECT_EQ(f(0.0), 1.0);
    EXPECT_EQ(f(0.5), 0.0);
    EXPECT_EQ(f(0.05), 1.0);
    double prev = 1.0;
    for (int k = 0; k <= 10000; ++k)
    {
        const double t = 0.75 * k / 10000;
        const double v = f(t);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        EXPECT_LE(v, prev);   // nonincreasing in t
        prev = v;
        if (t >= 0.2 && t <= 0.4)
        {
            const double c0 = f.chi(t);
            EXPECT_GE(c0, f.chi(t + 1e-4));
        }
    }
    EXPECT_EQ(f.chi(0.25), 1.0);
    EXPECT_EQ(f.chi(0.1), 0.0);
    EXPECT_THROW(bump_on_cone(0), std::invalid_argument);
}

TEST(Partition, TwoPatchesSumToOne)
{
    const auto pu = partition_of_unity({{0, 0.6, true}, {0.4, 1.0, false}}, 1.0);
    ASSERT_EQ(pu.functions.size(), 2u);
    for (int k = 0; k < 1000; ++k)
    {
        const double t = k / 1000.0;
        double sum = 0;
        for (std::size_t i = 0; i < 2; ++i)
        {
            const double v = pu.functions[i](t);
            EXPECT_GE(v, 0.0);
            if (v != 0)
                EXPECT_TRUE(pu.patches[i].contains(t)) << i << " at " << t;
            sum += v;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(Partition, SinglePatchIsConstant)
{
    const auto pu = partition_of_unity({{0, 2.0, true}}, 1.0);
    for (double t : {0.0, 0.3, 0.999})
        EXPECT_EQ(pu.functions[0](t), 1.0);
}

TEST(Partition, ManyOverlappingAnnuli)
{
    std::vector<RadialPatch> cover{{0, 0.15, true}};
    for (int k = 1; k < 10; ++k)
        cover.push_back({0.1 * k - 0.02, 0.1 * k + 0.12, false});
    const auto pu = partition_of_unity(cover, 1.0);
    for (int k = 0; k < 1000; ++k)
    {
        const double t = k / 1000.0;
        double sum = 0;
        for (const auto& f : pu.functions)
            sum += f(t);
        EXPECT_NEAR(sum, 1.0, 1e-12) << t;
    }
}

TEST(Partition, GapRejectedWithWitness)
{
    try
    {
        partition_of_unity({{0, 0.4, true}, {0.5, 1.0, false}}, 1.0);
        FAIL() << "gap accepted";
    }
    catch (const UncoveredRadius& e)
    {
        EXPECT_GE(e.radius, 0.4);
        EXPECT_LE(e.radius, 0.5);
    }
    EXPECT_THROW(partition_of_unity({{0, 0.4, true}, {0.4, 1.0, false}}, 1.0), UncoveredRadius);
    EXPECT_THROW(partition_of_unity({{0, 0.4, true}}, 1.0), UncoveredRadius);
    EXPECT_THROW(partition_of_unity({{0.1, 1.0, false}}, 1.0), std::invalid_argument);
}
