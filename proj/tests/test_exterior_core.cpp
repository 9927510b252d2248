#include "conex/conex.hpp"

#include <gtest/gtest.h>

using namespace conex;

namespace {

struct Polar
{
    ChartPtr plane = symplectic_cartesian_chart(1);
    ChartPtr cone = cone_chart_over(*detail::circle_chart());
    ChartMap map = ChartMap(cone, plane,
                            {CoefficientElement::variable(cone, 0) * CoefficientElement::cos_mode(cone, 1, 1),
                             CoefficientElement::variable(cone, 0) * CoefficientElement::sin_mode(cone, 1, 1)});
};

CoefficientElement var(const ChartPtr& c, std::size_t i)
{
    return CoefficientElement::variable(c, i);
}

}   // namespace

TEST(Rational, ParsesToLowestTerms)
{
    EXPECT_EQ(parse_rational("3/6"), ratio(1, 2));
    EXPECT_EQ(parse_rational("-4"), Rational(-4));
    EXPECT_EQ(parse_rational("-10/4").get_str(), "-5/2");
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("x"), std::invalid_argument);
    EXPECT_THROW(parse_rational(""), std::invalid_argument);
    EXPECT_EQ(ratio(108, 2).get_str(), "54");
}

TEST(GaussianRational, FieldOperations)
{
    const GaussianRational z(ratio(1, 2), ratio(-3, 4));
    EXPECT_EQ(z * z.inverse(), GaussianRational(1));
    EXPECT_EQ(i_power(2), GaussianRational(-1));
    EXPECT_EQ(i_power(-1), GaussianRational(Rational(0), Rational(-1)));
    EXPECT_TRUE((z * z.conj()).is_real());
}

TEST(Chart, ValidatesVariables)
{
    EXPECT_THROW(make_chart("bad", {{"x", VariableKind::cartesian}, {"x", VariableKind::cartesian}}),
                 std::invalid_argument);
    EXPECT_THROW(make_chart("bad", {{"t", VariableKind::radial}, {"s", VariableKind::radial}}), std::invalid_argument);
    const auto c = symplectic_cartesian_chart(2);
    EXPECT_EQ(c->dimension(), 4u);
    EXPECT_EQ(c->variable(1).name, "y1");
    EXPECT_EQ(c->variable(2).name, "x2");
}

TEST(Coefficient, FourierModesAreRealAndMultiply)
{
    const auto c = detail::circle_chart();
    const auto cs = CoefficientElement::cos_mode(c, 0, 1);
    const auto sn = CoefficientElement::sin_mode(c, 0, 1);
    EXPECT_TRUE(cs.is_real());
    EXPECT_TRUE(sn.is_real());
    EXPECT_FALSE(CoefficientElement::phase(c, 0, 1).is_real());
    EXPECT_EQ(cs * cs + sn * sn, CoefficientElement::one(c));
    // 2 sin cos = sin 2phi
    EXPECT_EQ(cs * sn * Rational(2), CoefficientElement::sin_mode(c, 0, 2));
    EXPECT_EQ(cs.derivative(0), -sn);
    EXPECT_NEAR(cs.evaluate({0.3}), std::cos(0.3), 1e-15);
    EXPECT_THROW(CoefficientElement::variable(c, 0), std::invalid_argument);
}

TEST(Coefficient, PolynomialCalculus)
{
    const auto c = symplectic_cartesian_chart(1);
    const auto x = var(c, 0);
    const auto y = var(c, 1);
    const auto f = x.pow(3) * y + y * Rational(5);
    EXPECT_EQ(f.derivative(0), x * x * y * Rational(3));
    EXPECT_EQ(f.polynomial_degree(), 4);
    EXPECT_EQ(f.degree_in(0), 3);
    EXPECT_EQ((x * y).divide_by_variable(0), y);
    EXPECT_THROW(f.divide_by_variable(0), std::domain_error);
    EXPECT_EQ(f.at_zero(0), y * Rational(5));
    EXPECT_DOUBLE_EQ(f.evaluate({2.0, 3.0}), 8 * 3 + 15);
}

TEST(Coefficient, ChartMismatchRejected)
{
    const auto a = var(symplectic_cartesian_chart(1), 0);
    const auto b = var(symplectic_cartesian_chart(2), 0);
    EXPECT_THROW(a + b, std::invalid_argument);
}

TEST(Forms, CanonicalTextForm)
{
    const auto c = symplectic_cartesian_chart(1);
    const auto x = var(c, 0);
    const auto y = var(c, 1);
    const DifferentialForm a = (x * x * Rational(3) - y * ratio(1, 2)) * DifferentialForm::basis(c, {0, 1});
    EXPECT_EQ(a.str(), "2-form on r2: (-1/2*y1 + 3*x1^2) dx1^dy1");
    EXPECT_EQ(DifferentialForm::zero(c, 1).str(), "1-form on r2: 0");
    EXPECT_EQ(DifferentialForm::basis(c, {1, 0}).str(), "2-form on r2: (-1) dx1^dy1");
}

TEST(Forms, WedgeSigns)
{
    const auto c = symplectic_cartesian_chart(2);
    const auto dx = DifferentialForm::coordinate_differential(c, 0);
    const auto dy = DifferentialForm::coordinate_differential(c, 1);
    const auto dz = DifferentialForm::coordinate_differential(c, 2);
    EXPECT_EQ(wedge(dx, dy), -wedge(dy, dx));
    EXPECT_TRUE(wedge(dx, dx).is_zero());
    EXPECT_EQ(wedge(wedge(dz, dx), dy), DifferentialForm::basis(c, {0, 1, 2}));
    EXPECT_EQ(DifferentialForm::basis(c, {2, 0, 1}), DifferentialForm::basis(c, {0, 1, 2}));
    EXPECT_EQ(DifferentialForm::basis(c, {1, 0, 2}), -DifferentialForm::basis(c, {0, 1, 2}));
}

TEST(Forms, ZeroFormsCompareEqualAcrossDegrees)
{
    const auto c = symplectic_cartesian_chart(1);
    EXPECT_EQ(DifferentialForm::zero(c, 0), DifferentialForm::zero(c, 2));
}

TEST(Forms, GradedProperties)
{
    for (int n = 1; n <= 2; ++n)
    {
        const auto c = symplectic_cartesian_chart(n);
        FormGenerator gen(c, 11 + n, 4);
        for (int k = 0; k < 60; ++k)
        {
            const auto a = gen.form();
            const auto b = gen.form();
            const int p = a.degree();
            const int q = b.degree();
            if (p + q <= static_cast<int>(c->dimension()))
            {
                const auto ab = wedge(a, b);
                EXPECT_EQ(ab, (p * q) % 2 ? -wedge(b, a) : wedge(b, a));
                const auto lhs = exterior_derivative(ab);
                auto rhs = wedge(exterior_derivative(a), b);
                rhs += p % 2 ? -wedge(a, exterior_derivative(b)) : wedge(a, exterior_derivative(b));
                EXPECT_EQ(lhs, rhs) << a.str() << " ; " << b.str();
            }
            EXPECT_TRUE(exterior_derivative(exterior_derivative(a)).is_zero()) << a.str();
        }
    }
}

TEST(Forms, InteriorProducts)
{
    const auto c = symplectic_cartesian_chart(1);
    const auto dxdy = DifferentialForm::basis(c, {0, 1});
    EXPECT_EQ(interior(VectorField::coordinate(c, 0), dxdy), DifferentialForm::coordinate_differential(c, 1));
    EXPECT_EQ(interior(VectorField::coordinate(c, 1), dxdy), -DifferentialForm::coordinate_differential(c, 0));
    // i(U ^ W) a = i_U(i_W a): i(d_y ^ d_x)(dx ^ dy) = 1.
    BivectorField g(c);
    g.add(1, 0, CoefficientElement::one(c));
    EXPECT_EQ(interior(g, dxdy).as_function(), CoefficientElement::one(c));
}

TEST(Forms, CartanFormula)
{
    const auto cone = cone_chart_over(*detail::circle_chart());
    const auto V = VectorField::radial_euler(cone);
    const auto t = var(cone, 0);
    const auto f = t.pow(3) * CoefficientElement::cos_mode(cone, 1, 2);
    EXPECT_EQ(lie_derivative(V, DifferentialForm::function(f)).as_function(), f * Rational(3));
    const auto a = f * DifferentialForm::coordinate_differential(cone, 1);
    EXPECT_EQ(lie_derivative(V, a), a * Rational(3));
}

TEST(Pullback, PolarCoordinates)
{
    Polar p;
    const auto t = var(p.cone, 0);
    const auto dt = DifferentialForm::coordinate_differential(p.cone, 0);
    const auto dphi = DifferentialForm::coordinate_differential(p.cone, 1);
    EXPECT_EQ(pullback(p.map, DifferentialForm::basis(p.plane, {0, 1})), t * wedge(dt, dphi));
    const auto x = var(p.plane, 0);
    const auto y = var(p.plane, 1);
    const auto liouville = x * DifferentialForm::coordinate_differential(p.plane, 1)
                           - y * DifferentialForm::coordinate_differential(p.plane, 0);
    EXPECT_EQ(pullback(p.map, liouville), (t * t) * dphi);
    EXPECT_EQ(p.map.pull(x * x + y * y), t * t);
}

TEST(Pullback, CommutesWithD)
{
    Polar p;
    FormGenerator gen(p.plane, 5, 4);
    for (int k = 0; k < 40; ++k)
    {
        const auto a = gen.form(k % 2);
        EXPECT_EQ(pullback(p.map, exterior_derivative(a)), exterior_derivative(pullback(p.map, a))) << a.str();
    }
}

TEST(Pullback, AngleShiftPhases)
{
    const auto c = detail::circle_chart();
    const ChartMap quarter(c, c, {AngleShift{0, 1, ratio(1, 4)}});
    EXPECT_EQ(quarter.pull(CoefficientElement::phase(c, 0, 1)),
              CoefficientElement::phase(c, 0, 1) * GaussianRational::i_unit());
    EXPECT_EQ(quarter.pull(CoefficientElement::cos_mode(c, 0, 1)), -CoefficientElement::sin_mode(c, 0, 1));
    const ChartMap third(c, c, {AngleShift{0, 1, ratio(1, 3)}});
    EXPECT_THROW(third.pull(CoefficientElement::phase(c, 0, 1)), std::domain_error);
    EXPECT_EQ(third.pull(CoefficientElement::phase(c, 0, 3)), CoefficientElement::phase(c, 0, 3));
    const ChartMap flip(c, c, {AngleShift{0, -1, 0}});
    EXPECT_EQ(pullback(flip, DifferentialForm::coordinate_differential(c, 0)),
              -DifferentialForm::coordinate_differential(c, 0));
}

TEST(Pullback, RejectsMalformedMaps)
{
    const auto c = detail::circle_chart();
    const auto plane = symplectic_cartesian_chart(1);
    EXPECT_THROW(ChartMap(c, c, {CoefficientElement::one(c)}), std::invalid_argument);
    EXPECT_THROW(ChartMap(c, plane, {CoefficientElement::one(c)}), std::invalid_argument);
    EXPECT_THROW(ChartMap(plane, c, {AngleShift{0, 1, 0}}), std::invalid_argument);
}
