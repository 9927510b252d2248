/**
 * Differential forms, vector and bivector fields on a chart, and the
 * exterior-calculus operations on them: wedge, d, interior products,
 * pullback and Lie derivative.
 *
 * A p-form is stored as a map from index sets (bit masks over the chart
 * variables, i.e. strictly increasing index tuples) to coefficients.  Zero
 * coefficients are never stored, so structural comparison is equality.
 *
 * Convention for bivectors: i(U ^ W) a := i_U(i_W(a)).
 */

#ifndef CONEX_FORMS_HPP
#define CONEX_FORMS_HPP

#include "coefficient.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace conex {

using IndexMask = std::uint32_t;

namespace detail {

inline IndexMask bit(std::size_t i) { return IndexMask(1) << i; }

/** Number of elements of `mask` strictly below index i. */
inline int count_below(IndexMask mask, std::size_t i)
{
    return std::popcount(mask & (bit(i) - 1));
}

/** Sign of e_I ^ e_J for disjoint I, J (0 if they intersect). */
inline int wedge_sign(IndexMask I, IndexMask J)
{
    if (I & J)
        return 0;
    int inversions = 0;
    IndexMask rest = J;
    while (rest)
    {
        const int j = std::countr_zero(rest);
        rest &= rest - 1;
        inversions += std::popcount(I >> (j + 1));
    }
    return (inversions % 2) ? -1 : 1;
}

inline std::vector<std::size_t> mask_indices(IndexMask mask)
{
    std::vector<std::size_t> out;
    while (mask)
    {
        out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return out;
}

}   // namespace detail

inline IndexMask index_mask(std::initializer_list<std::size_t> indices)
{
    IndexMask m = 0;
    for (auto i : indices)
        m |= detail::bit(i);
    return m;
}

class DifferentialForm
{
    public:
        using ComponentMap = std::map<IndexMask, CoefficientElement>;

        DifferentialForm() = default;
        DifferentialForm(ChartPtr chart, int degree) : chart_(std::move(chart)), degree_(degree) {}

        static DifferentialForm zero(ChartPtr chart, int degree) { return DifferentialForm(std::move(chart), degree); }

        /** A 0-form. */
        static DifferentialForm function(const CoefficientElement& f)
        {
            DifferentialForm a(f.chart(), 0);
            a.add_component(0, f);
            return a;
        }

        /** The basis form dx_{i1} ^ ... ^ dx_{ip} (indices in any order; sign applied). */
        static DifferentialForm basis(ChartPtr chart, const std::vector<std::size_t>& indices)
        {
            DifferentialForm a(chart, static_cast<int>(indices.size()));
            CoefficientElement c = CoefficientElement::one(chart);
            IndexMask m = 0;
            int sign = 1;
            for (auto i : indices)
            {
                if (i >= chart->dimension())
                    throw std::out_of_range("basis index out of range");
                const int s = detail::wedge_sign(m, detail::bit(i));
                if (s == 0)
                    return DifferentialForm(chart, a.degree_);
                sign *= s;
                m |= detail::bit(i);
            }
            a.add_component(m, c * Rational(sign));
            return a;
        }

        static DifferentialForm basis(ChartPtr chart, std::initializer_list<std::size_t> indices)
        {
            return basis(std::move(chart), std::vector<std::size_t>(indices));
        }

        /** dx_k for a single variable. */
        static DifferentialForm coordinate_differential(ChartPtr chart, std::size_t k)
        {
            return basis(std::move(chart), {k});
        }

        const ChartPtr& chart() const { return chart_; }
        int degree() const { return degree_; }
        const ComponentMap& components() const { return components_; }
        bool is_zero() const { return components_.empty(); }

        CoefficientElement component(IndexMask mask) const
        {
            auto it = components_.find(mask);
            return it == components_.end() ? CoefficientElement::zero(chart_) : it->second;
        }

        /** The coefficient of a 0-form. */
        CoefficientElement as_function() const
        {
            if (degree_ != 0 && !is_zero())
                throw std::domain_error("as_function on a form of degree " + std::to_string(degree_));
            return component(0);
        }

        void add_component(IndexMask mask, const CoefficientElement& c)
        {
            if (std::popcount(mask) != degree_)
                throw std::invalid_argument("component index set does not match form degree");
            if (chart_ && mask >> chart_->dimension())
                throw std::out_of_range("component index outside chart");
            if (c.is_zero())
                return;
            require_same_chart(chart_, c.chart(), "add_component");
            auto it = components_.find(mask);
            if (it == components_.end())
            {
                components_.emplace(mask, c);
                return;
            }
            it->second += c;
            if (it->second.is_zero())
                components_.erase(it);
        }

        DifferentialForm& operator+=(const DifferentialForm& o)
        {
            if (o.is_zero())
                return *this;
            if (is_zero())
                return *this = o;
            require_same_chart(chart_, o.chart_, "add");
            if (degree_ != o.degree_)
                throw std::invalid_argument("adding forms of different degree");
            for (const auto& [m, c] : o.components_)
                add_component(m, c);
            return *this;
        }

        DifferentialForm& operator-=(const DifferentialForm& o) { return *this += -o; }

        DifferentialForm& operator*=(const GaussianRational& s)
        {
            if (s.is_zero())
            {
                components_.clear();
                return *this;
            }
            for (auto& [m, c] : components_)
                c *= s;
            return *this;
        }

        friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
        friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) { return a -= b; }
        friend DifferentialForm operator*(DifferentialForm a, const GaussianRational& s) { return a *= s; }
        friend DifferentialForm operator*(DifferentialForm a, const Rational& s) { return a *= GaussianRational(s); }
        friend DifferentialForm operator-(DifferentialForm a) { return a *= GaussianRational(-1); }

        /** Multiply every component by the function f. */
        friend DifferentialForm operator*(const CoefficientElement& f, const DifferentialForm& a)
        {
            DifferentialForm out(a.chart_ ? a.chart_ : f.chart(), a.degree_);
            if (f.is_zero() || a.is_zero())
                return out;
            require_same_chart(f.chart(), a.chart_, "scale");
            for (const auto& [m, c] : a.components_)
                out.add_component(m, f * c);
            return out;
        }

        /** Zero forms compare equal regardless of degree. */
        friend bool operator==(const DifferentialForm& a, const DifferentialForm& b)
        {
            if (a.is_zero() || b.is_zero())
                return a.is_zero() && b.is_zero();
            return same_chart(a.chart_, b.chart_) && a.degree_ == b.degree_ && a.components_ == b.components_;
        }

        bool is_real() const
        {
            for (const auto& [m, c] : components_)
            {
                if (!c.is_real())
                    return false;
            }
            return true;
        }

        /** Largest polynomial degree among the coefficients. */
        int coefficient_degree() const
        {
            int d = 0;
            for (const auto& [m, c] : components_)
                d = std::max(d, c.polynomial_degree());
            return d;
        }

        /**
         * Canonical text: "<p>-form on <chart>: (coef) dv1^dv2 + ...", components
         * in increasing mask order.
         */
        std::string str() const
        {
            std::string s = std::to_string(degree_) + "-form on " + (chart_ ? chart_->name() : "?") + ": ";
            if (components_.empty())
                return s + "0";
            bool first = true;
            for (const auto& [m, c] : components_)
            {
                if (!first)
                    s += " + ";
                first = false;
                s += "(" + c.str() + ")";
                bool f = true;
                for (auto i : detail::mask_indices(m))
                {
                    s += f ? " d" : "^d";
                    f = false;
                    s += chart_->variable(i).name;
                }
            }
            return s;
        }

    private:
        ChartPtr chart_;
        int degree_ = 0;
        ComponentMap components_;
};

class VectorField
{
    public:
        explicit VectorField(ChartPtr chart) : chart_(chart)
        {
            for (std::size_t i = 0; i < chart->dimension(); ++i)
                components_.push_back(CoefficientElement::zero(chart));
        }

        VectorField(ChartPtr chart, std::vector<CoefficientElement> components)
            : chart_(std::move(chart)), components_(std::move(components))
        {
            if (components_.size() != chart_->dimension())
                throw std::invalid_argument("vector field needs one component per chart variable");
            for (auto& c : components_)
            {
                if (c.chart())
                    require_same_chart(chart_, c.chart(), "vector field");
                else
                    c = CoefficientElement::zero(chart_);
            }
        }

        /** The coordinate field d/dx_k. */
        static VectorField coordinate(ChartPtr chart, std::size_t k)
        {
            VectorField v(chart);
            v.components_.at(k) = CoefficientElement::one(chart);
            return v;
        }

        /** The radial (Liouville) field t d/dt on a chart with a radial variable. */
        static VectorField radial_euler(ChartPtr chart)
        {
            const std::size_t r = chart->radial_index();
            if (r == chart->dimension())
                throw std::invalid_argument("chart '" + chart->name() + "' has no radial variable");
            VectorField v(chart);
            v.components_[r] = CoefficientElement::variable(chart, r);
            return v;
        }

        const ChartPtr& chart() const { return chart_; }
        const std::vector<CoefficientElement>& components() const { return components_; }
        const CoefficientElement& component(std::size_t i) const { return components_.at(i); }

        /** V(f) = sum_k V_k df/dx_k. */
        CoefficientElement apply(const CoefficientElement& f) const
        {
            CoefficientElement out = CoefficientElement::zero(chart_);
            for (std::size_t k = 0; k < components_.size(); ++k)
            {
                if (!components_[k].is_zero())
                    out += components_[k] * f.derivative(k);
            }
            return out;
        }

    private:
        ChartPtr chart_;
        std::vector<CoefficientElement> components_;
};

/**
 * Antisymmetric bivector field sum_{i<j} g_ij d_i ^ d_j.
 */
class BivectorField
{
    public:
        BivectorField() = default;
        explicit BivectorField(ChartPtr chart) : chart_(std::move(chart)) {}

        /** Adds c * (d_i ^ d_j); i > j is stored as -c * (d_j ^ d_i). */
        void add(std::size_t i, std::size_t j, const CoefficientElement& c)
        {
            if (i == j || c.is_zero())
                return;
            if (i >= chart_->dimension() || j >= chart_->dimension())
                throw std::out_of_range("bivector index out of range");
            require_same_chart(chart_, c.chart(), "bivector");
            const auto key = i < j ? std::make_pair(i, j) : std::make_pair(j, i);
            CoefficientElement v = i < j ? c : -c;
            auto it = components_.find(key);
            if (it == components_.end())
            {
                components_.emplace(key, std::move(v));
                return;
            }
            it->second += v;
            if (it->second.is_zero())
                components_.erase(it);
        }

        const ChartPtr& chart() const { return chart_; }
        const std::map<std::pair<std::size_t, std::size_t>, CoefficientElement>& components() const
        {
            return components_;
        }

    private:
        ChartPtr chart_;
        std::map<std::pair<std::size_t, std::size_t>, CoefficientElement> components_;
};

// ---------------------------------------------------------------------------
// Operations

inline DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b)
{
    require_same_chart(a.chart(), b.chart(), "wedge");
    const int degree = a.degree() + b.degree();
    DifferentialForm out(a.chart(), degree);
    if (degree > static_cast<int>(a.chart()->dimension()))
        return out;
    for (const auto& [ma, ca] : a.components())
    {
        for (const auto& [mb, cb] : b.components())
        {
            const int s = detail::wedge_sign(ma, mb);
            if (s == 0)
                continue;
            CoefficientElement c = ca * cb;
            if (s < 0)
                c = -c;
            out.add_component(ma | mb, c);
        }
    }
    return out;
}

inline DifferentialForm exterior_derivative(const DifferentialForm& a)
{
    const auto& chart = a.chart();
    DifferentialForm out(chart, a.degree() + 1);
    if (!chart || a.is_zero())
        return out;
    const std::size_t n = chart->dimension();
    for (const auto& [m, c] : a.components())
    {
        for (std::size_t k = 0; k < n; ++k)
        {
            if (m & detail::bit(k))
                continue;
            CoefficientElement dc = c.derivative(k);
            if (dc.is_zero())
                continue;
            if (detail::count_below(m, k) % 2)
                dc = -dc;
            out.add_component(m | detail::bit(k), dc);
        }
    }
    return out;
}

/** Contraction i_V a (antiderivation of degree -1). */
inline DifferentialForm interior(const VectorField& v, const DifferentialForm& a)
{
    DifferentialForm out(v.chart(), a.degree() - 1);
    if (a.is_zero() || a.degree() == 0)
        return out;
    require_same_chart(v.chart(), a.chart(), "interior");
    for (const auto& [m, c] : a.components())
    {
        for (auto k : detail::mask_indices(m))
        {
            const auto& vk = v.component(k);
            if (vk.is_zero())
                continue;
            CoefficientElement term = vk * c;
            if (detail::count_below(m, k) % 2)
                term = -term;
            out.add_component(m & ~detail::bit(k), term);
        }
    }
    return out;
}

/** Contraction by the coordinate field d/dx_k. */
inline DifferentialForm interior_coordinate(std::size_t k, const DifferentialForm& a)
{
    DifferentialForm out(a.chart(), a.degree() - 1);
    for (const auto& [m, c] : a.components())
    {
        if (!(m & detail::bit(k)))
            continue;
        out.add_component(m & ~detail::bit(k), detail::count_below(m, k) % 2 ? -c : c);
    }
    return out;
}

/** i(G) a with i(d_i ^ d_j) a = i_{d_i}(i_{d_j} a). */
inline DifferentialForm interior(const BivectorField& g, const DifferentialForm& a)
{
    DifferentialForm out(g.chart(), a.degree() - 2);
    if (a.is_zero() || a.degree() < 2)
        return out;
    require_same_chart(g.chart(), a.chart(), "interior_bivector");
    for (const auto& [ij, gij] : g.components())
    {
        DifferentialForm inner = interior_coordinate(ij.first, interior_coordinate(ij.second, a));
        out += gij * inner;
    }
    return out;
}

inline DifferentialForm lie_derivative(const VectorField& v, const DifferentialForm& a)
{
    if (a.degree() == 0)
        return DifferentialForm::function(v.apply(a.as_function()));
    return exterior_derivative(interior(v, a)) + interior(v, exterior_derivative(a));
}

// ---------------------------------------------------------------------------
// Pullback

/**
 * Substitution phi_target = sign * phi_source + 2 pi * turn for an angle
 * variable of the target chart.
 */
struct AngleShift
{
    std::size_t source_index = 0;
    int sign = 1;
    Rational turn = 0;
};

/**
 * A smooth map from chart `source` to chart `target`, given by one
 * substitution per target variable.  Non-angle target variables take a
 * coefficient element on the source chart; angle target variables take an
 * AngleShift.
 */
class ChartMap
{
    public:
        using Substitution = std::variant<CoefficientElement, AngleShift>;

        ChartMap(ChartPtr source, ChartPtr target, std::vector<Substitution> components)
            : source_(std::move(source)), target_(std::move(target)), components_(std::move(components))
        {
            if (components_.size() != target_->dimension())
                throw std::invalid_argument("chart map needs one component per target variable");
            for (std::size_t k = 0; k < components_.size(); ++k)
            {
                if (const auto* e = std::get_if<CoefficientElement>(&components_[k]))
                {
                    if (target_->is_angle(k))
                        throw std::invalid_argument("angle target '" + target_->variable(k).name
                                                    + "' needs an AngleShift substitution");
                    if (e->chart())
                        require_same_chart(source_, e->chart(), "chart map component");
                    else
                        components_[k] = CoefficientElement::zero(source_);
                }
                else
                {
                    const auto& s = std::get<AngleShift>(components_[k]);
                    if (!target_->is_angle(k) || s.source_index >= source_->dimension()
                        || !source_->is_angle(s.source_index) || (s.sign != 1 && s.sign != -1))
                        throw std::invalid_argument("invalid angle substitution for '" + target_->variable(k).name + "'");
                }
            }
        }

        static ChartMap identity(ChartPtr chart)
        {
            std::vector<Substitution> comps;
            for (std::size_t k = 0; k < chart->dimension(); ++k)
            {
                if (chart->is_angle(k))
                    comps.emplace_back(AngleShift{k, 1, 0});
                else
                    comps.emplace_back(CoefficientElement::variable(chart, k));
            }
            return ChartMap(chart, chart, std::move(comps));
        }

        /** Linear map x -> A x on a cartesian chart (pullback x_i -> sum_j A_ij x_j). */
        static ChartMap linear(ChartPtr chart, const std::vector<std::vector<Rational>>& matrix)
        {
            const std::size_t n = chart->dimension();
            if (matrix.size() != n)
                throw std::invalid_argument("linear map: matrix size mismatch");
            std::vector<Substitution> comps;
            for (std::size_t i = 0; i < n; ++i)
            {
                if (matrix[i].size() != n || chart->is_angle(i))
                    throw std::invalid_argument("linear map needs a square matrix on a non-angle chart");
                CoefficientElement e = CoefficientElement::zero(chart);
                for (std::size_t j = 0; j < n; ++j)
                {
                    if (sgn(matrix[i][j]) != 0)
                        e += CoefficientElement::variable(chart, j) * matrix[i][j];
                }
                comps.emplace_back(std::move(e));
            }
            return ChartMap(chart, chart, std::move(comps));
        }

        const ChartPtr& source() const { return source_; }
        const ChartPtr& target() const { return target_; }
        const std::vector<Substitution>& components() const { return components_; }

        /** True when every substitution is phi -> phi + const or x -> x. */
        bool is_pure_rotation() const
        {
            if (!same_chart(source_, target_))
                return false;
            for (std::size_t k = 0; k < components_.size(); ++k)
            {
                if (const auto* s = std::get_if<AngleShift>(&components_[k]))
                {
                    if (s->sign != 1 || s->source_index != k)
                        return false;
                }
                else if (!(std::get<CoefficientElement>(components_[k]) == CoefficientElement::variable(source_, k)))
                {
                    return false;
                }
            }
            return true;
        }

        /** f o F for a function f on the target chart. */
        CoefficientElement pull(const CoefficientElement& f) const
        {
            CoefficientElement out = CoefficientElement::zero(source_);
            if (f.is_zero())
                return out;
            require_same_chart(f.chart(), target_, "pullback");
            std::map<std::pair<std::size_t, int>, CoefficientElement> powers;
            auto power = [&](std::size_t k, int e) -> const CoefficientElement& {
                auto key = std::make_pair(k, e);
                auto it = powers.find(key);
                if (it != powers.end())
                    return it->second;
                const auto& base = std::get<CoefficientElement>(components_[k]);
                return powers.emplace(key, base.pow(static_cast<unsigned>(e))).first->second;
            };
            for (const auto& [key, c] : f.terms())
            {
                TermKey angle_key(source_->dimension(), 0);
                GaussianRational coef = c;
                for (std::size_t k = 0; k < key.size(); ++k)
                {
                    if (key[k] == 0 || !target_->is_angle(k))
                        continue;
                    const auto& s = std::get<AngleShift>(components_[k]);
                    angle_key[s.source_index] += s.sign * key[k];
                    coef *= root_of_unity(s.turn * key[k]);
                }
                CoefficientElement term = CoefficientElement::monomial(source_, angle_key, coef);
                for (std::size_t k = 0; k < key.size(); ++k)
                {
                    if (key[k] != 0 && !target_->is_angle(k))
                        term = term * power(k, key[k]);
                }
                out += term;
            }
            return out;
        }

        /** F^*(dx_k). */
        DifferentialForm pull_differential(std::size_t k) const
        {
            if (const auto* s = std::get_if<AngleShift>(&components_[k]))
                return DifferentialForm::coordinate_differential(source_, s->source_index) * Rational(s->sign);
            return exterior_derivative(DifferentialForm::function(std::get<CoefficientElement>(components_[k])));
        }

    private:
        /** exp(2 pi i x) for rational x, exact only when 4x is an integer. */
        static GaussianRational root_of_unity(const Rational& x)
        {
            Rational q = x * 4;
            if (q.get_den() != 1)
                throw std::domain_error("rotation phase exp(2 pi i * " + x.get_str()
                                        + ") is not a Gaussian rational");
            return i_power(q.get_num().get_si());
        }

        ChartPtr source_;
        ChartPtr target_;
        std::vector<Substitution> components_;
};

inline DifferentialForm pullback(const ChartMap& map, const DifferentialForm& a)
{
    DifferentialForm out(map.source(), a.degree());
    if (a.is_zero())
        return out;
    require_same_chart(a.chart(), map.target(), "pullback");
    std::map<std::size_t, DifferentialForm> differentials;
    for (const auto& [m, c] : a.components())
    {
        DifferentialForm term = DifferentialForm::function(map.pull(c));
        for (auto k : detail::mask_indices(m))
        {
            auto it = differentials.find(k);
            if (it == differentials.end())
                it = differentials.emplace(k, map.pull_differential(k)).first;
            term = wedge(term, it->second);
        }
        out += term;
    }
    return out;
}

}   // namespace conex

#endif
