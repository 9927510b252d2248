/**
 * Links L in a sphere, the cone cL with defining function t, conical
 * symplectic forms t^2 w + t dt ^ a, and the compatible-metric C^1 check.
 *
 * Links are one-dimensional (circles parameterized by an angle phi).  A link
 * coordinate is sqrt(radicand) * factor with radicand and factor exact
 * trigonometric polynomials, so circles of non-rational radius stay exact.
 */

#ifndef CONEX_CONE_HPP
#define CONEX_CONE_HPP

#include "homology.hpp"
#include "trig_roots.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace conex {

struct LinkCoordinate
{
    CoefficientElement radicand;
    CoefficientElement factor;

    double evaluate(double phi) const
    {
        return std::sqrt(radicand.evaluate({phi})) * factor.evaluate({phi});
    }
};

namespace detail {

/** Rational square root when `q` is the square of a rational. */
inline std::optional<Rational> rational_sqrt(const Rational& q)
{
    if (sgn(q) < 0)
        return std::nullopt;
    Integer n = q.get_num();
    Integer d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    mpz_sqrt(n.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), d.get_mpz_t());
    return Rational(n, d);
}

inline ChartPtr circle_chart()
{
    static const ChartPtr chart = make_chart("s1", {{"phi", VariableKind::angle}});
    return chart;
}

inline ChartPtr ambient_chart(std::size_t dim)
{
    if (dim % 2 == 0)
        return symplectic_cartesian_chart(static_cast<int>(dim / 2));
    if (dim == 3)
        return make_chart("r3", {{"x", VariableKind::cartesian}, {"y", VariableKind::cartesian},
                                 {"z", VariableKind::cartesian}});
    throw std::invalid_argument("unsupported ambient dimension " + std::to_string(dim));
}

}   // namespace detail

class Link
{
    public:
        Link(std::string name, std::vector<LinkCoordinate> coordinates, Rational radius_squared,
             std::optional<DifferentialForm> contact_form = std::nullopt)
            : name_(std::move(name)), coords_(std::move(coordinates)), radius_squared_(std::move(radius_squared)),
              contact_(std::move(contact_form))
        {
            if (coords_.size() < 2)
                throw std::invalid_argument("link needs at least two ambient coordinates");
            for (auto& c : coords_)
            {
                if (!c.radicand.chart())
                    c.radicand = CoefficientElement::zero(chart());
                if (!c.factor.chart())
                    c.factor = CoefficientElement::zero(chart());
                require_same_chart(chart(), c.radicand.chart(), "link coordinate");
                require_same_chart(chart(), c.factor.chart(), "link coordinate");
                if (!c.radicand.is_real() || !c.factor.is_real())
                    throw std::invalid_argument("link coordinates must be real");
                if (!radicand_positive(c.radicand))
                    throw std::invalid_argument("link radicand must be positive on the circle");
            }
            if (!on_sphere())
                throw std::invalid_argument("link '" + name_ + "' does not lie on the sphere of radius^2 "
                                            + radius_squared_.get_str());
            if (contact_)
            {
                if (contact_->degree() != 1)
                    throw std::invalid_argument("contact form on a circle must be a 1-form");
                require_same_chart(chart(), contact_->chart(), "link contact form");
            }
        }

        const std::string& name() const { return name_; }
        ChartPtr chart() const { return detail::circle_chart(); }
        std::size_t dimension() const { return 1; }
        std::size_t ambient_dim() const { return coords_.size(); }
        const std::vector<LinkCoordinate>& coordinates() const { return coords_; }
        const Rational& radius_squared() const { return radius_squared_; }
        const std::optional<DifferentialForm>& contact_form() const { return contact_; }

        /** Sum of squared coordinates as an exact trig polynomial. */
        CoefficientElement squared_norm() const
        {
            CoefficientElement s = CoefficientElement::zero(chart());
            for (const auto& c : coords_)
                s += c.radicand * c.factor * c.factor;
            return s;
        }

        bool on_sphere() const { return squared_norm() == CoefficientElement::constant(chart(), radius_squared_); }

        std::vector<double> point(double phi) const
        {
            std::vector<double> p;
            for (const auto& c : coords_)
                p.push_back(c.evaluate(phi));
            return p;
        }

        /** Coordinates as trig polynomials when every radicand is a rational square. */
        std::optional<std::vector<CoefficientElement>> exact_coordinates() const
        {
            std::vector<CoefficientElement> out;
            for (const auto& c : coords_)
            {
                if (c.factor.is_zero())
                {
                    out.push_back(c.factor);
                    continue;
                }
                if (!c.radicand.is_constant())
                    return std::nullopt;
                auto r = detail::rational_sqrt(c.radicand.constant_value().re);
                if (!r)
                    return std::nullopt;
                out.push_back(c.factor * *r);
            }
            return out;
        }

    private:
        static bool radicand_positive(const CoefficientElement& r)
        {
            if (r.is_zero())
                return false;
            auto t = TrigPolynomial::from(r, 0);
            auto nv = trig_nonvanishing(t);
            return nv.nonvanishing && nv.sign > 0;
        }

        std::string name_;
        std::vector<LinkCoordinate> coords_;
        Rational radius_squared_;
        std::optional<DifferentialForm> contact_;
};

/** The standard contact form sum (x_i dy_i - y_i dx_i) on R^{2n}. */
struct SphereContact
{
    int n = 0;
    SymplecticChart ambient;
    DifferentialForm alpha0;

    /** Restriction along a map from a link chart into R^{2n}. */
    DifferentialForm restrict(const ChartMap& inclusion) const { return pullback(inclusion, alpha0); }
};

inline SphereContact standard_sphere_contact(int n)
{
    if (n < 1)
        throw std::invalid_argument("standard sphere contact needs n >= 1");
    SphereContact s;
    s.n = n;
    s.ambient = make_symplectic_chart(n);
    s.alpha0 = DifferentialForm::zero(s.ambient.chart, 1);
    const auto& c = s.ambient.chart;
    for (int i = 1; i <= n; ++i)
    {
        const auto x = CoefficientElement::variable(c, s.ambient.x_index(i));
        const auto y = CoefficientElement::variable(c, s.ambient.y_index(i));
        s.alpha0 += x * DifferentialForm::coordinate_differential(c, s.ambient.y_index(i));
        s.alpha0 -= y * DifferentialForm::coordinate_differential(c, s.ambient.x_index(i));
    }
    return s;
}

namespace detail {

/** Map from the circle chart into the ambient cartesian chart. */
inline ChartMap link_inclusion(const std::vector<CoefficientElement>& coords)
{
    std::vector<ChartMap::Substitution> comps(coords.begin(), coords.end());
    return ChartMap(circle_chart(), ambient_chart(coords.size()), std::move(comps));
}

inline LinkCoordinate plain(const CoefficientElement& f)
{
    return {CoefficientElement::one(f.chart()), f};
}

/** Link with exact coordinates and the restriction of the standard contact form. */
inline Link contact_link(std::string name, std::vector<CoefficientElement> coords, Rational radius_squared)
{
    const auto contact = standard_sphere_contact(static_cast<int>(coords.size() / 2));
    DifferentialForm alpha = contact.restrict(link_inclusion(coords));
    std::vector<LinkCoordinate> lc;
    for (const auto& c : coords)
        lc.push_back(plain(c));
    return Link(std::move(name), std::move(lc), std::move(radius_squared), std::move(alpha));
}

}   // namespace detail

/** The unit circle (cos phi, sin phi) in R^2 with a = d phi. */
inline Link flat_circle()
{
    const auto c = detail::circle_chart();
    return detail::contact_link("flat", {CoefficientElement::cos_mode(c, 0, 1), CoefficientElement::sin_mode(c, 0, 1)},
                                1);
}

/**
 * Circle z = z(phi) on the unit sphere S^2:
 * (sqrt(1 - z^2) cos phi, sqrt(1 - z^2) sin phi, z).  The 1-form is the
 * restriction of x dy - y dx, i.e. (1 - z^2) d phi.
 */
inline Link height_profile_circle(std::string name, const CoefficientElement& z)
{
    const auto c = detail::circle_chart();
    require_same_chart(c, z.chart(), "height profile");
    const CoefficientElement rho2 = CoefficientElement::one(c) - z * z;
    DifferentialForm alpha = rho2 * DifferentialForm::coordinate_differential(c, 0);
    std::vector<LinkCoordinate> coords{{rho2, CoefficientElement::cos_mode(c, 0, 1)},
                                       {rho2, CoefficientElement::sin_mode(c, 0, 1)},
                                       {CoefficientElement::one(c), z}};
    return Link(std::move(name), std::move(coords), 1, std::move(alpha));
}

/** Latitude circle z = theta on S^2, |theta| < 1. */
inline Link latitude_circle(const Rational& theta)
{
    if (abs(theta) >= 1)
        throw std::invalid_argument("latitude needs |theta| < 1");
    return height_profile_circle("latitude(" + theta.get_str() + ")",
                                 CoefficientElement::constant(detail::circle_chart(), theta));
}

/** A perturbed circle with height profile z(phi); requires |z| < 1. */
inline Link perturbed_circle(const CoefficientElement& z, std::string name = "")
{
    if (name.empty())
        name = "perturbed(" + z.str() + ")";
    return height_profile_circle(std::move(name), z);
}

/** Hopf circle (a e^{i phi}, b e^{i phi}) in S^3, a^2 + b^2 = 1. */
inline Link hopf_circle(const Rational& a, const Rational& b)
{
    if (a * a + b * b != 1)
        throw std::invalid_argument("Hopf circle needs a^2 + b^2 = 1");
    const auto c = detail::circle_chart();
    const auto cs = CoefficientElement::cos_mode(c, 0, 1);
    const auto sn = CoefficientElement::sin_mode(c, 0, 1);
    return detail::contact_link("hopf(" + a.get_str() + "," + b.get_str() + ")", {cs * a, sn * a, cs * b, sn * b}, 1);
}

/**
 * The circle (z1, z2) = (e^{i phi}, i e^{i phi}) on the quadric
 * z1^2 + z2^2 = 0 in S^3(sqrt 2).  Only m = 1 is supported.
 */
inline Link quadric_link(int m)
{
    if (m != 1)
        throw std::invalid_argument("quadric_link: only m = 1 is supported");
    const auto c = detail::circle_chart();
    const auto cs = CoefficientElement::cos_mode(c, 0, 1);
    const auto sn = CoefficientElement::sin_mode(c, 0, 1);
    return detail::contact_link("quadric(1)", {cs, sn, -sn, cs}, 2);
}

/** z1^2 + z2^2 for the quadric link in complex form (x1 + i y1, x2 + i y2). */
inline CoefficientElement quadric_defining_value(const Link& link)
{
    auto xs = link.exact_coordinates();
    if (!xs || xs->size() != 4)
        throw std::invalid_argument("quadric check needs an exact link in R^4");
    const GaussianRational I = GaussianRational::i_unit();
    const CoefficientElement z1 = (*xs)[0] + (*xs)[1] * I;
    const CoefficientElement z2 = (*xs)[2] + (*xs)[3] * I;
    return z1 * z1 + z2 * z2;
}

class ConeSpace
{
    public:
        explicit ConeSpace(Link link) : link_(std::move(link)), chart_(cone_chart_over(*link_.chart())) {}

        const Link& link() const { return link_; }
        const ChartPtr& chart() const { return chart_; }
        std::size_t radial_index() const { return 0; }
        std::size_t angle_index() const { return 1; }

        CoefficientElement t() const { return CoefficientElement::variable(chart_, 0); }

        /** The defining function rho([z, t]) = t. */
        CoefficientElement defining_function() const { return t(); }

        /** Projection cone -> link, (t, phi) -> phi. */
        ChartMap projection() const
        {
            return ChartMap(chart_, link_.chart(), {AngleShift{angle_index(), 1, 0}});
        }

        DifferentialForm lift(const DifferentialForm& a) const { return pullback(projection(), a); }

        CoefficientElement lift(const CoefficientElement& f) const { return projection().pull(f); }

        /** Embedding (t, phi) -> t x(phi) when the link has exact coordinates. */
        ChartMap embedding() const
        {
            auto xs = link_.exact_coordinates();
            if (!xs)
                throw std::domain_error("link '" + link_.name() + "' has no rational-coefficient parameterization");
            std::vector<ChartMap::Substitution> comps;
            for (const auto& x : *xs)
                comps.emplace_back(t() * lift(x));
            return ChartMap(chart_, detail::ambient_chart(xs->size()), std::move(comps));
        }

        /** Ambient point at (t, phi). */
        std::vector<double> point(double t, double phi) const
        {
            auto p = link_.point(phi);
            for (auto& v : p)
                v *= t;
            return p;
        }

    private:
        Link link_;
        ChartPtr chart_;
};

/** Functions on the cone that do not depend on t, as functions on the link. */
inline std::optional<DifferentialForm> descend_to_link(const ConeSpace& cone, const DifferentialForm& a)
{
    DifferentialForm out = DifferentialForm::zero(cone.link().chart(), a.degree());
    for (const auto& [m, c] : a.components())
    {
        if (m & detail::bit(cone.radial_index()))
            return std::nullopt;
        CoefficientElement f = CoefficientElement::zero(cone.link().chart());
        for (const auto& [key, coef] : c.terms())
        {
            if (key[cone.radial_index()] != 0)
                return std::nullopt;
            f.add_term(TermKey(key.begin() + 1, key.end()), coef);
        }
        out.add_component(m >> 1, f);
    }
    return out;
}

struct ConicalSymplecticForm
{
    ConeSpace cone;
    DifferentialForm omega_hat;
    DifferentialForm alpha;
    DifferentialForm total;
};

class DegenerateContactForm : public std::invalid_argument
{
    public:
        DegenerateContactForm(const std::string& what, double witness)
            : std::invalid_argument(what), witness_angle(witness)
        {
        }
        double witness_angle;
};

/** Exact nondegeneracy of a 1-form a(phi) d phi on a circle. */
inline NonvanishingResult contact_nondegeneracy(const DifferentialForm& alpha)
{
    if (alpha.degree() != 1)
        throw std::invalid_argument("contact form on a circle must be a 1-form");
    const CoefficientElement a = alpha.component(detail::bit(0));
    return trig_nonvanishing(TrigPolynomial::from(a.chart() ? a : CoefficientElement::zero(alpha.chart()), 0));
}

/** t^2 w + t dt ^ a with w = d a / 2. */
inline ConicalSymplecticForm make_cone_symplectic(const ConeSpace& cone, const DifferentialForm& alpha)
{
    if (!alpha.chart())
        throw DegenerateContactForm("contact form is zero", 0.0);
    require_same_chart(cone.link().chart(), alpha.chart(), "make_cone_symplectic");
    const auto nd = contact_nondegeneracy(alpha);
    if (!nd.nonvanishing)
        throw DegenerateContactForm("contact form vanishes at phi = " + std::to_string(*nd.witness_angle),
                                    *nd.witness_angle);
    ConicalSymplecticForm f{cone, exterior_derivative(alpha) * Rational(1, 2), alpha, {}};
    const auto t = cone.t();
    const auto dt = DifferentialForm::coordinate_differential(cone.chart(), cone.radial_index());
    f.total = (t * t) * cone.lift(f.omega_hat) + wedge(t * dt, cone.lift(alpha));
    DifferentialForm top = DifferentialForm::function(CoefficientElement::one(cone.chart()));
    for (std::size_t k = 0; k < cone.chart()->dimension() / 2; ++k)
        top = wedge(top, f.total);
    if (top.is_zero())
        throw std::logic_error("conical form has vanishing top power");
    return f;
}

struct LiouvilleReport
{
    bool contraction = false;   // (t d_t) _| total = t^2 a
    bool lie_scaling = false;   // L_{t d_t} total = 2 total
    bool closed = false;        // d total = 0
    bool contact_relation = false;   // d a = 2 w
    bool exact_primitive = false;    // total = d(t^2 a) / 2

    bool all() const { return contraction && lie_scaling && closed && contact_relation && exact_primitive; }
};

inline LiouvilleReport liouville_identities(const ConicalSymplecticForm& f)
{
    const auto& cone = f.cone;
    const auto V = VectorField::radial_euler(cone.chart());
    const auto t2 = cone.t() * cone.t();
    const auto alpha = cone.lift(f.alpha);
    LiouvilleReport r;
    r.contraction = interior(V, f.total) == t2 * alpha;
    r.lie_scaling = lie_derivative(V, f.total) == f.total * Rational(2);
    r.closed = exterior_derivative(f.total).is_zero();
    r.contact_relation = exterior_derivative(f.alpha) == f.omega_hat * Rational(2);
    r.exact_primitive = f.total == exterior_derivative(t2 * alpha) * Rational(1, 2);
    return r;
}

/**
 * Split a 2-form on the cone as t^2 w + t dt ^ a with w, a pulled back from
 * the link.  Returns nullopt when no such decomposition exists.
 */
inline std::optional<std::pair<DifferentialForm, DifferentialForm>> decompose_conical(const ConeSpace& cone,
                                                                                     const DifferentialForm& total)
{
    require_same_chart(cone.chart(), total.chart(), "decompose_conical");
    if (total.degree() != 2)
        return std::nullopt;
    const std::size_t r = cone.radial_index();
    const auto t = cone.t();
    const DifferentialForm radial = interior_coordinate(r, total);
    const auto dt = DifferentialForm::coordinate_differential(cone.chart(), r);
    const DifferentialForm tangential = total - wedge(dt, radial);
    try
    {
        DifferentialForm a_cone(cone.chart(), 1);
        for (const auto& [m, c] : radial.components())
            a_cone.add_component(m, c.divide_by_variable(r));
        DifferentialForm w_cone(cone.chart(), 2);
        for (const auto& [m, c] : tangential.components())
            w_cone.add_component(m, c.divide_by_variable(r).divide_by_variable(r));
        auto alpha = descend_to_link(cone, a_cone);
        auto omega_hat = descend_to_link(cone, w_cone);
        if (!alpha || !omega_hat)
            return std::nullopt;
        return std::make_pair(*omega_hat, *alpha);
    }
    catch (const std::domain_error&)
    {
        return std::nullopt;
    }
}

/** The flat cone over S^1 with Z_k acting by phi -> phi + 2 pi / k. */
inline std::pair<ConeSpace, GroupAction> group_quotient_cone(std::size_t k)
{
    if (k < 2)
        throw std::invalid_argument("group_quotient_cone needs k >= 2");
    ConeSpace cone(flat_circle());
    const auto& c = cone.chart();
    ChartMap gen(c, c, {CoefficientElement::variable(c, 0), AngleShift{1, 1, Rational(1, static_cast<long>(k))}});
    GroupAction action(k, std::move(gen));
    if (!action.preserves(cone.lift(*cone.link().contact_form())))
        throw std::logic_error("rotation does not preserve the contact form");
    return {std::move(cone), std::move(action)};
}

// ---------------------------------------------------------------------------
// Compatible metric near the apex

/**
 * Metric on R^2: delta + h with h_ij(x) = |x|^order P_ij(x / |x|), where the
 * quadratic form P = (xx, xy, yy) has trig-polynomial entries on the circle.
 * order = 2 is the conical perturbation t^2 (g - g0).
 */
struct MetricPerturbation
{
    CoefficientElement xx;
    CoefficientElement xy;
    CoefficientElement yy;
    int radial_order = 2;

    static MetricPerturbation none()
    {
        const auto c = detail::circle_chart();
        return {CoefficientElement::zero(c), CoefficientElement::zero(c), CoefficientElement::zero(c), 2};
    }

    bool is_zero() const { return xx.is_zero() && xy.is_zero() && yy.is_zero(); }

    void validate() const
    {
        for (const auto* e : {&xx, &xy, &yy})
        {
            if (!e->chart())
                continue;
            require_same_chart(detail::circle_chart(), e->chart(), "metric perturbation");
            TrigPolynomial::from(*e, 0);
        }
        if (radial_order < 0)
            throw std::invalid_argument("metric perturbation needs radial order >= 0");
    }

    /** h_ij at a cartesian point (the metric is delta_ij + h_ij). */
    double perturbation(int i, int j, double x, double y) const
    {
        const double rho = std::hypot(x, y);
        const CoefficientElement& e = (i == 0 && j == 0) ? xx : (i == 1 && j == 1) ? yy : xy;
        if (rho == 0.0 || !e.chart() || e.is_zero())
            return 0.0;
        return std::pow(rho, radial_order) * e.evaluate({std::atan2(y, x)});
    }
};

struct MetricCheckReport
{
    std::size_t rays = 0;
    double max_deviation = 0.0;
    double worst_angle = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/**
 * Along `rays` directions u, compare the forward-difference partials
 * d_x h_ij, d_y h_ij at the point rho u with those at the apex.  For a C^1
 * metric they agree up to O(rho).
 */
inline MetricCheckReport metric_c1_check(const MetricPerturbation& p, std::size_t rays = 10000,
                                         double tolerance = 1e-6, double rho = 1e-7, double step = 1e-9)
{
    p.validate();
    if (rays == 0)
        throw std::invalid_argument("metric check needs at least one ray");
    if (tolerance < 0)
        throw std::invalid_argument("metric check needs tolerance >= 0");
    MetricCheckReport r;
    r.rays = rays;
    r.tolerance = tolerance;
    const double dirs[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
    for (std::size_t k = 0; k < rays && !p.is_zero(); ++k)
    {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(rays);
        const double px = rho * std::cos(phi);
        const double py = rho * std::sin(phi);
        for (int i = 0; i < 2; ++i)
        {
            for (int j = i; j < 2; ++j)
            {
                for (const auto& d : dirs)
                {
                    const double at_apex = p.perturbation(i, j, step * d[0], step * d[1]) / step;
                    const double near
                        = (p.perturbation(i, j, px + step * d[0], py + step * d[1]) - p.perturbation(i, j, px, py))
                          / step;
                    const double dev = std::abs(near - at_apex);
                    if (dev > r.max_deviation)
                    {
                        r.max_deviation = dev;
                        r.worst_angle = phi;
                    }
                }
            }
        }
    }
    r.passed = r.max_deviation <= tolerance;
    return r;
}

}   // namespace conex

#endif
