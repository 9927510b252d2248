/**
 * Euclidean smooth structures on cones over circle links: the membership
 * decision for latitude circles, tangent cones and degree of flatness,
 * links with a prescribed number of flat pairs, Nash cone membership, bump
 * functions and partitions of unity in the radial variable.
 */

#ifndef CONEX_SMOOTH_STRUCTURE_HPP
#define CONEX_SMOOTH_STRUCTURE_HPP

#include "cone.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace conex {

/**
 * A function on the cone sum c_{a,b} t^a e^{i b phi}, a >= 0, with
 * c_{a,-b} = conj(c_{a,b}).
 */
class ConeFunction
{
    public:
        using Key = std::pair<int, int>;   // (a, b)

        ConeFunction() = default;

        /**
         * Parse terms "a:b:num/den", each meaning q t^a (e^{ib phi} + e^{-ib phi})
         * for b != 0 and q t^a for b = 0.
         */
        static ConeFunction parse(const std::vector<std::string>& terms)
        {
            ConeFunction f;
            for (const auto& term : terms)
            {
                const auto c1 = term.find(':');
                const auto c2 = c1 == std::string::npos ? c1 : term.find(':', c1 + 1);
                if (c2 == std::string::npos)
                    throw std::invalid_argument("term '" + term + "' is not of the form a:b:num/den");
                int a = 0;
                int b = 0;
                try
                {
                    std::size_t used = 0;
                    a = std::stoi(term.substr(0, c1), &used);
                    if (used != c1)
                        throw std::invalid_argument("");
                    b = std::stoi(term.substr(c1 + 1, c2 - c1 - 1), &used);
                    if (used != c2 - c1 - 1)
                        throw std::invalid_argument("");
                }
                catch (const std::exception&)
                {
                    throw std::invalid_argument("term '" + term + "' has malformed exponents");
                }
                const Rational q = parse_rational(term.substr(c2 + 1));
                f.add_term(a, b, q);
                if (b != 0)
                    f.add_term(a, -b, q);
            }
            return f;
        }

        /** From an element on a cone chart (t, phi). */
        static ConeFunction from_element(const CoefficientElement& e)
        {
            ConeFunction f;
            if (e.is_zero())
                return f;
            if (e.chart()->dimension() != 2 || e.chart()->radial_index() != 0 || !e.chart()->is_angle(1))
                throw std::invalid_argument("cone function needs a (t, phi) chart");
            for (const auto& [key, c] : e.terms())
                f.add_term(key[0], key[1], c);
            f.check_real();
            return f;
        }

        void add_term(int a, int b, const GaussianRational& c)
        {
            if (a < 0)
                throw std::invalid_argument("negative radial exponent " + std::to_string(a));
            if (c.is_zero())
                return;
            auto& slot = terms_[{a, b}];
            slot += c;
            if (slot.is_zero())
                terms_.erase({a, b});
        }

        const std::map<Key, GaussianRational>& terms() const { return terms_; }
        bool is_zero() const { return terms_.empty(); }

        bool is_real() const
        {
            for (const auto& [k, c] : terms_)
            {
                auto it = terms_.find({k.first, -k.second});
                if (it == terms_.end() || !(it->second == c.conj()))
                    return false;
            }
            return true;
        }

        void check_real() const
        {
            if (!is_real())
                throw std::invalid_argument("cone function violates the reality constraint");
        }

        friend ConeFunction operator+(const ConeFunction& f, const ConeFunction& g)
        {
            ConeFunction out = f;
            for (const auto& [k, c] : g.terms_)
                out.add_term(k.first, k.second, c);
            return out;
        }

        friend ConeFunction operator*(const ConeFunction& f, const ConeFunction& g)
        {
            ConeFunction out;
            for (const auto& [k1, c1] : f.terms_)
            {
                for (const auto& [k2, c2] : g.terms_)
                    out.add_term(k1.first + k2.first, k1.second + k2.second, c1 * c2);
            }
            return out;
        }

        friend bool operator==(const ConeFunction& f, const ConeFunction& g) { return f.terms_ == g.terms_; }

        std::string str() const
        {
            if (terms_.empty())
                return "0";
            std::string s;
            for (const auto& [k, c] : terms_)
            {
                if (!s.empty())
                    s += " + ";
                s += "(" + c.str() + ") t^" + std::to_string(k.first) + " e^{" + std::to_string(k.second) + "i phi}";
            }
            return s;
        }

    private:
        std::map<Key, GaussianRational> terms_;
};

/**
 * Generators t x_i(phi) of the smooth structure induced by the embedding of
 * a link into R^{l+1}, stored as (radicand, t * factor).
 */
struct EuclideanStructure
{
    ConeSpace cone;
    std::vector<LinkCoordinate> generators;
};

inline EuclideanStructure euclidean_structure(const ConeSpace& cone)
{
    EuclideanStructure e{cone, {}};
    for (const auto& c : cone.link().coordinates())
    {
        LinkCoordinate g{cone.lift(c.radicand), cone.t() * cone.lift(c.factor)};
        if (!g.factor.at_zero(cone.radial_index()).is_zero())
            throw std::logic_error("generator does not vanish at the apex");
        e.generators.push_back(std::move(g));
    }
    return e;
}

namespace detail {

/** z(phi) when the link is a height-profile circle on S^2. */
inline std::optional<CoefficientElement> height_profile(const Link& link)
{
    const auto& cs = link.coordinates();
    if (cs.size() != 3 || link.radius_squared() != 1)
        return std::nullopt;
    const auto c = link.chart();
    if (!(cs[2].radicand == CoefficientElement::one(c)))
        return std::nullopt;
    const CoefficientElement z = cs[2].factor;
    const CoefficientElement rho2 = CoefficientElement::one(c) - z * z;
    if (!(cs[0].radicand == rho2) || !(cs[1].radicand == rho2) || !(cs[0].factor == CoefficientElement::cos_mode(c, 0, 1))
        || !(cs[1].factor == CoefficientElement::sin_mode(c, 0, 1)))
        return std::nullopt;
    return z;
}

inline std::optional<Rational> latitude_of(const Link& link)
{
    auto z = height_profile(link);
    if (!z || !z->is_constant())
        return std::nullopt;
    return z->constant_value().re;
}

}   // namespace detail

/**
 * Membership of f in the smooth structure of the cone over the latitude
 * circle z = theta: every term t^a e^{ib phi} needs |b| <= a, and a = b mod 2
 * when theta = 0.
 */
inline bool membership(const ConeFunction& f, const Rational& theta)
{
    f.check_real();
    for (const auto& [k, c] : f.terms())
    {
        const auto [a, b] = k;
        if (std::abs(b) > a)
            return false;
        if (sgn(theta) == 0 && (a - b) % 2 != 0)
            return false;
    }
    return true;
}

inline bool membership(const ConeFunction& f, const EuclideanStructure& e)
{
    auto theta = detail::latitude_of(e.cone.link());
    if (!theta)
        throw std::invalid_argument("membership is decided for latitude-circle cones only");
    return membership(f, *theta);
}

/** Chart (x, t) for functions on the wedge-cone model. */
inline ChartPtr wcone_chart()
{
    static const ChartPtr chart = make_chart("wcone", {{"x", VariableKind::cartesian}, {"t", VariableKind::radial}});
    return chart;
}

/** f = t g(x, t) + c for a polynomial g iff f(., 0) is constant. */
inline bool wcone_membership(const CoefficientElement& f)
{
    if (f.is_zero())
        return true;
    const std::size_t t = f.chart()->radial_index();
    if (t == f.chart()->dimension())
        throw std::invalid_argument("wcone membership needs a chart with a radial variable");
    return f.at_zero(t).is_constant() || f.at_zero(t).is_zero();
}

/** Flat locus of a circle link: phi with -x(phi) in L. */
struct FlatSet
{
    bool whole_circle = false;
    std::vector<double> angles;   // isolated flat angles in [0, 2 pi)
};

struct TangentCone
{
    Link link;
    std::vector<std::vector<double>> generators;   // unit directions x(phi_k) / |x|
    std::vector<std::pair<double, double>> flat_pairs;
    FlatSet flat;
};

/**
 * Flat locus.  For a height-profile circle the antipode of x(phi) lies on L
 * iff z(phi) + z(phi + pi) = 0; other links are handled when x(phi + pi) =
 * -x(phi) identically.
 */
inline FlatSet antipodal_set(const Link& link)
{
    FlatSet fs;
    const auto c = link.chart();
    const ChartMap half_turn(c, c, {AngleShift{0, 1, Rational(1, 2)}});
    if (auto z = detail::height_profile(link))
    {
        const CoefficientElement s = *z + half_turn.pull(*z);
        if (s.is_zero())
        {
            fs.whole_circle = true;
            return fs;
        }
        fs.angles = trig_zeros(TrigPolynomial::from(s, 0));
        return fs;
    }
    auto xs = link.exact_coordinates();
    if (xs)
    {
        bool odd = true;
        for (const auto& x : *xs)
            odd = odd && (half_turn.pull(x) == -x);
        if (odd)
        {
            fs.whole_circle = true;
            return fs;
        }
    }
    throw std::invalid_argument("flat locus of link '" + link.name() + "' is not supported");
}

inline TangentCone tangent_cone(const ConeSpace& cone, std::size_t samples = 360)
{
    TangentCone tc{cone.link(), {}, {}, antipodal_set(cone.link())};
    const double radius = std::sqrt(cone.link().radius_squared().get_d());
    for (std::size_t k = 0; k < samples; ++k)
    {
        auto p = cone.link().point(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples));
        for (auto& v : p)
            v /= radius;
        tc.generators.push_back(std::move(p));
    }
    for (double phi : tc.flat.angles)
    {
        if (phi < std::numbers::pi)
            tc.flat_pairs.emplace_back(phi, phi + std::numbers::pi);
    }
    return tc;
}

/**
 * Connected components of the flat set minus the apex: one when every ray is
 * flat (a punctured plane), otherwise one per isolated flat ray.
 */
inline std::size_t degree_of_flatness(const TangentCone& tc)
{
    return tc.flat.whole_circle ? 1 : tc.flat.angles.size();
}

/**
 * A height-profile circle with exactly 2k flat rays.  k = 0 is the latitude
 * 1/2.  Otherwise z(phi) = S(2 phi) / 4^m with
 * S(psi) = prod_j (cos psi - c_j) over floor(k/2) distinct c_j in [0, 1),
 * times (1 + cos psi) for odd k; m is the number of factors.
 */
inline Link construct_flatness_link(int k)
{
    if (k < 0)
        throw std::invalid_argument("flat pair count must be >= 0");
    const auto c = detail::circle_chart();
    if (k == 0)
        return latitude_circle(Rational(1, 2));
    const auto cos2 = CoefficientElement::cos_mode(c, 0, 2);
    CoefficientElement s = CoefficientElement::one(c);
    int factors = 0;
    for (int j = 0; j < k / 2; ++j)
    {
        s = s * (cos2 - CoefficientElement::constant(c, ratio(j, k + 1)));
        ++factors;
    }
    if (k % 2 == 1)
    {
        s = s * (CoefficientElement::one(c) + cos2);
        ++factors;
    }
    Rational scale = 1;
    for (int j = 0; j < factors; ++j)
        scale /= 4;
    return perturbed_circle(s * scale, "flat-pairs(" + std::to_string(k) + ")");
}

namespace detail {

inline std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const std::array<double, 3>& a)
{
    return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

/** Unit normal of the cone surface at (t, phi) from central differences. */
inline std::array<double, 3> surface_normal(const ConeSpace& cone, double t, double phi)
{
    const double h = 1e-6;
    auto p = [&](double tt, double ff) {
        auto v = cone.point(tt, ff);
        return std::array<double, 3>{v[0], v[1], v[2]};
    };
    std::array<double, 3> et{};
    std::array<double, 3> ef{};
    const auto tp = p(t * (1 + h), phi);
    const auto tm = p(t * (1 - h), phi);
    const auto fp = p(t, phi + h);
    const auto fm = p(t, phi - h);
    for (int i = 0; i < 3; ++i)
    {
        et[i] = (tp[i] - tm[i]) / (2 * h * t);
        ef[i] = (fp[i] - fm[i]) / (2 * h * t);
    }
    auto n = cross(et, ef);
    const double l = norm(n);
    for (auto& v : n)
        v /= l;
    return n;
}

/** Limit of the unit normal as t -> 0 along the ray at phi. */
inline std::array<double, 3> limit_normal(const ConeSpace& cone, double phi)
{
    std::array<double, 3> n = surface_normal(cone, 1.0, phi);
    for (double t = 0.5; t >= 1.0 / 1024; t /= 2)
    {
        const auto next = surface_normal(cone, t, phi);
        const double diff = std::abs(next[0] - n[0]) + std::abs(next[1] - n[1]) + std::abs(next[2] - n[2]);
        n = next;
        if (diff < 1e-12)
            break;
    }
    return n;
}

}   // namespace detail

struct NashMembership
{
    bool member = false;
    double min_distance = 0.0;   // min over phi of |<v/|v|, n(phi)>|
    double witness_angle = 0.0;
};

/**
 * Whether the direction v lies within `tol` of some limit tangent plane of
 * the cone along rays approaching the apex.
 */
inline NashMembership nash_cone_membership(const ConeSpace& cone, const std::array<double, 3>& v, double tol = 1e-8,
                                           std::size_t grid = 2048)
{
    if (!(tol > 0))
        throw std::invalid_argument("Nash cone tolerance must be > 0");
    if (cone.link().ambient_dim() != 3)
        throw std::invalid_argument("Nash cone membership needs a cone in R^3");
    const double vn = detail::norm(v);
    if (vn == 0)
        throw std::invalid_argument("Nash cone direction must be nonzero");
    const std::array<double, 3> u{v[0] / vn, v[1] / vn, v[2] / vn};
    std::vector<std::array<double, 3>> normals;
    auto g = [&](double phi) {
        const auto n = detail::limit_normal(cone, phi);
        return u[0] * n[0] + u[1] * n[1] + u[2] * n[2];
    };
    const double step = 2.0 * std::numbers::pi / static_cast<double>(grid);
    std::vector<double> vals(grid);
    for (std::size_t k = 0; k < grid; ++k)
        vals[k] = g(step * static_cast<double>(k));
    NashMembership r;
    r.min_distance = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t k = 0; k < grid; ++k)
    {
        const double a = vals[k];
        const double b = vals[(k + 1) % grid];
        if (a == 0 || (a < 0) != (b < 0))
        {
            r.member = true;
            r.min_distance = 0.0;
            r.witness_angle = step * static_cast<double>(k);
            return r;
        }
        if (std::abs(a) < r.min_distance)
        {
            r.min_distance = std::abs(a);
            best = k;
        }
    }
    // Golden-section refinement of |g| around the best grid point.
    double lo = step * (static_cast<double>(best) - 1);
    double hi = step * (static_cast<double>(best) + 1);
    const double ratio = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = std::abs(g(x1));
    double f2 = std::abs(g(x2));
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it)
    {
        if (f1 < f2)
        {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = std::abs(g(x1));
        }
        else
        {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = std::abs(g(x2));
        }
    }
    const double x = f1 < f2 ? x1 : x2;
    r.min_distance = std::min(r.min_distance, std::min(f1, f2));
    r.witness_angle = x;
    r.member = r.min_distance <= tol;
    return r;
}

// ---------------------------------------------------------------------------
// Bump functions

/** exp(-1/x) for x > 0, else 0. */
inline double psi(double x)
{
    return x > 0 ? std::exp(-1.0 / x) : 0.0;
}

/** Smooth step: 0 for x <= 0, 1 for x >= 1. */
inline double smooth_step(double x)
{
    if (x <= 0)
        return 0.0;
    if (x >= 1)
        return 1.0;
    const double a = psi(x);
    return a / (a + psi(1 - x));
}

/**
 * Radial bump at the apex.  chi is 0 on (0, e/5], rises on (e/5, 2e/5), is 1
 * on [2e/5, 3e/5], falls on (3e/5, 4e/5) and is 0 afterwards; f = 1 - chi
 * below 2e/5 and 0 beyond, so f(apex) = 1 and supp f lies in t < e.
 */
struct ConeBump
{
    double epsilon = 1.0;

    double chi(double a) const
    {
        const double e5 = epsilon / 5;
        if (a <= e5)
            return 0.0;
        if (a < 2 * e5)
            return smooth_step((a - e5) / e5);
        if (a <= 3 * e5)
            return 1.0;
        if (a < 4 * e5)
            return smooth_step((4 * e5 - a) / e5);
        return 0.0;
    }

    double operator()(double t) const
    {
        if (t <= 0)
            return 1.0;
        if (t <= 2 * epsilon / 5)
            return 1.0 - chi(t);
        return 0.0;
    }
};

inline ConeBump bump_on_cone(double epsilon)
{
    if (!(epsilon > 0))
        throw std::invalid_argument("bump radius must be > 0");
    return ConeBump{epsilon};
}

/** A patch of a radial cover: the apex cap [0, upper) or an annulus (lower, upper). */
struct RadialPatch
{
    double lower = 0.0;
    double upper = 0.0;
    bool apex = false;

    bool contains(double t) const { return (apex ? t >= 0 : t > lower) && t < upper; }
};

class UncoveredRadius : public std::invalid_argument
{
    public:
        UncoveredRadius(const std::string& what, double r) : std::invalid_argument(what), radius(r) {}
        double radius;
};

struct PartitionOfUnity
{
    std::vector<RadialPatch> patches;
    double domain = 0.0;
    double margin = 0.0;
    std::vector<std::function<double(double)>> functions;
};

/**
 * Partition of unity on [0, R) subordinate to a cover by one apex cap and
 * annuli: smooth bumps g_i positive on the patches shrunk by a common margin,
 * normalized by their sum.
 */
inline PartitionOfUnity partition_of_unity(std::vector<RadialPatch> cover, double R)
{
    if (!(R > 0))
        throw std::invalid_argument("partition domain must have R > 0");
    std::size_t caps = 0;
    for (const auto& p : cover)
    {
        if (!(p.upper > p.lower) || (p.apex && p.lower != 0) || (!p.apex && p.lower < 0))
            throw std::invalid_argument("malformed radial patch");
        caps += p.apex ? 1 : 0;
    }
    if (caps != 1)
        throw std::invalid_argument("cover needs exactly one apex cap");

    // Coverage sweep.
    std::vector<RadialPatch> sorted = cover;
    std::sort(sorted.begin(), sorted.end(), [](const RadialPatch& a, const RadialPatch& b) {
        return a.apex != b.apex ? a.apex : a.lower < b.lower;
    });
    double reach = sorted.front().upper;
    for (std::size_t i = 1; i < sorted.size() && reach < R; ++i)
    {
        if (sorted[i].lower >= reach)
            throw UncoveredRadius("radius " + std::to_string(reach) + " is not covered", reach);
        reach = std::max(reach, sorted[i].upper);
    }
    if (reach < R)
        throw UncoveredRadius("radius " + std::to_string(reach) + " is not covered", reach);

    // Depth of x: distance to the nearest inner edge of the best patch.
    auto inner_low = [&](const RadialPatch& p) { return p.apex ? -std::numeric_limits<double>::infinity() : p.lower; };
    auto inner_high = [&](const RadialPatch& p) { return p.upper >= R ? std::numeric_limits<double>::infinity() : p.upper; };
    auto depth = [&](double x) {
        double best = 0.0;
        for (const auto& p : cover)
        {
            if (!p.contains(x) && !(x >= R && p.upper >= R && x > p.lower))
                continue;
            best = std::max(best, std::min(x - inner_low(p), inner_high(p) - x));
        }
        return best;
    };
    std::vector<double> candidates{0.0, R};
    for (const auto& p : cover)
    {
        for (double e : {p.lower, p.upper})
        {
            if (e >= 0 && e <= R)
                candidates.push_back(e);
        }
        for (const auto& q : cover)
        {
            const double mid = (p.upper + q.lower) / 2;
            if (mid >= 0 && mid <= R)
                candidates.push_back(mid);
        }
    }
    double min_depth = std::numeric_limits<double>::infinity();
    for (double x : candidates)
    {
        // Endpoints are excluded from open patches; probe just inside the domain.
        const double probe = x >= R ? R : x;
        min_depth = std::min(min_depth, depth(probe));
    }
    PartitionOfUnity pu;
    pu.patches = cover;
    pu.domain = R;
    pu.margin = std::isinf(min_depth) ? R : min_depth / 2;

    std::vector<std::function<double(double)>> g;
    for (const auto& p : cover)
    {
        const double lo = inner_low(p);
        const double hi = inner_high(p);
        const double m = pu.margin;
        const double w = std::isinf(lo) || std::isinf(hi) ? R : hi - lo;
        g.push_back([lo, hi, m, w](double t) {
            double v = 1.0;
            if (!std::isinf(lo))
                v *= psi((t - lo - m) / w);
            if (!std::isinf(hi))
                v *= psi((hi - m - t) / w);
            return v;
        });
    }
    for (std::size_t i = 0; i < g.size(); ++i)
    {
        pu.functions.push_back([g, i](double t) {
            double sum = 0.0;
            for (const auto& gj : g)
                sum += gj(t);
            return g[i](t) / sum;
        });
    }
    return pu;
}

}   // namespace conex

#endif
