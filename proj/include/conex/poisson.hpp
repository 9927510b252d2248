/**
 * Flat symplectic charts R^{2n}: the Poisson bracket, the Brylinski boundary
 * delta = i(G) d - d i(G), and the symplectic star operator.
 */

#ifndef CONEX_POISSON_HPP
#define CONEX_POISSON_HPP

#include "forms.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace conex {

/**
 * R^{2n} with omega = sum dx_i ^ dy_i, G = sum d/dy_i ^ d/dx_i and
 * vol = omega^n / n!.  The star operator is tabulated on basis forms.
 */
struct SymplecticChart
{
    ChartPtr chart;
    int n = 0;
    DifferentialForm omega;
    BivectorField bivector;
    DifferentialForm volume;
    /** *(e_I) = sum_J c_J e_J for every basis index set I. */
    std::map<IndexMask, std::vector<std::pair<IndexMask, Rational>>> star_table;

    std::size_t x_index(int i) const { return static_cast<std::size_t>(2 * (i - 1)); }
    std::size_t y_index(int i) const { return static_cast<std::size_t>(2 * (i - 1) + 1); }
    std::size_t dimension() const { return static_cast<std::size_t>(2 * n); }
};

namespace detail {

inline Rational determinant(std::vector<std::vector<Rational>> m)
{
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c)
    {
        std::size_t p = n;
        for (std::size_t r = c; r < n; ++r)
        {
            if (sgn(m[r][c]) != 0)
            {
                p = r;
                break;
            }
        }
        if (p == n)
            return 0;
        if (p != c)
        {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r)
        {
            if (sgn(m[r][c]) == 0)
                continue;
            const Rational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k)
                m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

}   // namespace detail

/** G(dx_a, dx_b) := i(G)(dx_a ^ dx_b) for constant G, as a dense matrix. */
inline std::vector<std::vector<Rational>> bivector_pairing(const SymplecticChart& s)
{
    const std::size_t dim = s.dimension();
    std::vector<std::vector<Rational>> pair(dim, std::vector<Rational>(dim, 0));
    for (std::size_t a = 0; a < dim; ++a)
    {
        for (std::size_t b = 0; b < dim; ++b)
        {
            if (a == b)
                continue;
            DifferentialForm ab = DifferentialForm::basis(s.chart, {a, b});
            GaussianRational v = interior(s.bivector, ab).as_function().constant_value();
            pair[a][b] = v.re;
        }
    }
    return pair;
}

/**
 * G^p(e_K, e_I) = det[G(dx_{k_a}, dx_{i_b})], the pairing induced on p-forms.
 */
inline Rational induced_pairing(const std::vector<std::vector<Rational>>& pair, IndexMask K, IndexMask I)
{
    const auto ks = detail::mask_indices(K);
    const auto is = detail::mask_indices(I);
    if (ks.size() != is.size())
        throw std::invalid_argument("induced pairing between forms of different degree");
    if (ks.empty())
        return 1;
    std::vector<std::vector<Rational>> m(ks.size(), std::vector<Rational>(is.size()));
    for (std::size_t a = 0; a < ks.size(); ++a)
    {
        for (std::size_t b = 0; b < is.size(); ++b)
            m[a][b] = pair[ks[a]][is[b]];
    }
    return detail::determinant(std::move(m));
}

inline SymplecticChart make_symplectic_chart(int n)
{
    SymplecticChart s;
    s.chart = symplectic_cartesian_chart(n);
    s.n = n;
    s.omega = DifferentialForm::zero(s.chart, 2);
    s.bivector = BivectorField(s.chart);
    const auto one = CoefficientElement::one(s.chart);
    for (int i = 1; i <= n; ++i)
    {
        s.omega += DifferentialForm::basis(s.chart, {s.x_index(i), s.y_index(i)});
        s.bivector.add(s.y_index(i), s.x_index(i), one);
    }
    DifferentialForm power = DifferentialForm::function(one);
    Rational factorial = 1;
    for (int i = 1; i <= n; ++i)
    {
        power = wedge(power, s.omega);
        factorial *= i;
    }
    s.volume = power * Rational(1 / factorial);

    if (!exterior_derivative(s.omega).is_zero())
        throw std::logic_error("symplectic form is not closed");
    const IndexMask full = (IndexMask(1) << s.dimension()) - 1;
    const auto vol_coef = s.volume.component(full);
    if (vol_coef.is_zero() || !vol_coef.is_constant())
        throw std::logic_error("volume form is degenerate");
    const Rational vol = vol_coef.constant_value().re;

    // Solve e_K ^ *e_I = G^p(e_K, e_I) vol for every K; only J = complement(K)
    // contributes to the left side.
    const auto pair = bivector_pairing(s);
    for (IndexMask I = 0; I <= full; ++I)
    {
        std::vector<std::pair<IndexMask, Rational>> image;
        for (IndexMask K = 0; K <= full; ++K)
        {
            if (std::popcount(K) != std::popcount(I))
                continue;
            const Rational g = induced_pairing(pair, K, I);
            if (sgn(g) == 0)
                continue;
            const IndexMask J = full & ~K;
            const int sign = detail::wedge_sign(K, J);
            image.emplace_back(J, g * vol / sign);
        }
        std::sort(image.begin(), image.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        s.star_table.emplace(I, std::move(image));
    }
    return s;
}

inline void require_on_chart(const SymplecticChart& s, const ChartPtr& c, const char* op)
{
    require_same_chart(s.chart, c, op);
}

/** {f, g} = G(df ^ dg). */
inline CoefficientElement poisson_bracket(const CoefficientElement& f, const CoefficientElement& g,
                                          const SymplecticChart& s)
{
    require_on_chart(s, f.chart(), "poisson_bracket");
    require_on_chart(s, g.chart(), "poisson_bracket");
    DifferentialForm df = exterior_derivative(DifferentialForm::function(f));
    DifferentialForm dg = exterior_derivative(DifferentialForm::function(g));
    return interior(s.bivector, wedge(df, dg)).as_function();
}

/** delta = i(G) o d - d o i(G). */
inline DifferentialForm brylinski_delta(const DifferentialForm& a, const SymplecticChart& s)
{
    if (a.is_zero())
        return DifferentialForm::zero(s.chart, a.degree() - 1);
    require_on_chart(s, a.chart(), "brylinski_delta");
    DifferentialForm out = interior(s.bivector, exterior_derivative(a));
    out -= exterior_derivative(interior(s.bivector, a));
    return out;
}

/** f0 df1 ^ ... ^ dfp. */
inline DifferentialForm decomposable_form(const CoefficientElement& f0, const std::vector<CoefficientElement>& fs)
{
    DifferentialForm out = DifferentialForm::function(f0);
    for (const auto& f : fs)
        out = wedge(out, exterior_derivative(DifferentialForm::function(f)));
    return out;
}

/**
 * delta on a decomposable form through the bracket expansion
 *   sum_i (-1)^{i+1} {f0, fi} df1..^dfi^..dfp
 *   + sum_{i<j} (-1)^{i+j} f0 d{fi, fj} ^ df1..^dfi^..^dfj^..dfp.
 */
inline DifferentialForm brylinski_delta_expanded(const CoefficientElement& f0,
                                                 const std::vector<CoefficientElement>& fs,
                                                 const SymplecticChart& s)
{
    const std::size_t p = fs.size();
    DifferentialForm out = DifferentialForm::zero(s.chart, static_cast<int>(p) - 1);
    auto omit = [&](std::size_t skip_a, std::size_t skip_b) {
        std::vector<CoefficientElement> rest;
        for (std::size_t k = 0; k < p; ++k)
        {
            if (k != skip_a && k != skip_b)
                rest.push_back(fs[k]);
        }
        return rest;
    };
    for (std::size_t i = 0; i < p; ++i)
    {
        CoefficientElement b = poisson_bracket(f0, fs[i], s);
        DifferentialForm term = decomposable_form(b, omit(i, p));
        out += (i % 2 == 0) ? term : -term;   // (-1)^{(i+1)+1} with 1-based i
    }
    for (std::size_t i = 0; i < p; ++i)
    {
        for (std::size_t j = i + 1; j < p; ++j)
        {
            DifferentialForm dbr = exterior_derivative(DifferentialForm::function(poisson_bracket(fs[i], fs[j], s)));
            DifferentialForm term = wedge(f0 * dbr, decomposable_form(CoefficientElement::one(s.chart), omit(i, j)));
            out += ((i + j) % 2 == 0) ? term : -term;   // (-1)^{(i+1)+(j+1)}
        }
    }
    return out;
}

/** *_omega, defined by beta ^ *alpha = G^p(beta, alpha) vol. */
inline DifferentialForm symplectic_star(const DifferentialForm& a, const SymplecticChart& s)
{
    const int target = static_cast<int>(s.dimension()) - a.degree();
    DifferentialForm out = DifferentialForm::zero(s.chart, target);
    if (a.is_zero())
        return out;
    require_on_chart(s, a.chart(), "symplectic_star");
    for (const auto& [I, f] : a.components())
    {
        for (const auto& [J, c] : s.star_table.at(I))
            out.add_component(J, f * c);
    }
    return out;
}

/** Whether delta(a) = (-1)^{deg a + 1} * d * a holds exactly. */
inline bool star_delta_identity_check(const DifferentialForm& a, const SymplecticChart& s)
{
    DifferentialForm lhs = brylinski_delta(a, s);
    DifferentialForm rhs = symplectic_star(exterior_derivative(symplectic_star(a, s)), s);
    if ((a.degree() + 1) % 2 != 0)
        rhs = -rhs;
    return lhs == rhs;
}

}   // namespace conex

#endif
