/**
 * CoefficientElement: exact scalar functions on a chart.
 *
 * An element is a finite sum of terms c * prod_k m_k, where m_k is x_k^e
 * (e >= 0) for a cartesian or radial variable and exp(i b phi_k) for an angle
 * variable.  Keys store e or b per variable in chart order.  Coefficients are
 * Gaussian rationals; real-valued elements satisfy c(-b) = conj(c(b)).
 */

#ifndef CONEX_COEFFICIENT_HPP
#define CONEX_COEFFICIENT_HPP

#include "chart.hpp"
#include "rational.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace conex {

using TermKey = std::vector<int>;

class CoefficientElement
{
    public:
        using TermMap = std::map<TermKey, GaussianRational>;

        CoefficientElement() = default;
        explicit CoefficientElement(ChartPtr chart) : chart_(std::move(chart)) {}

        static CoefficientElement constant(ChartPtr chart, const GaussianRational& c)
        {
            CoefficientElement e(chart);
            e.add_term(TermKey(e.chart_->dimension(), 0), c);
            return e;
        }

        static CoefficientElement zero(ChartPtr chart) { return CoefficientElement(std::move(chart)); }

        static CoefficientElement one(ChartPtr chart) { return constant(std::move(chart), Rational(1)); }

        /** The coordinate function of a cartesian or radial variable. */
        static CoefficientElement variable(ChartPtr chart, std::size_t index)
        {
            if (chart->is_angle(index))
                throw std::invalid_argument("angle variable '" + chart->variable(index).name
                                            + "' is not a coefficient; use cos_mode/sin_mode/phase");
            TermKey k(chart->dimension(), 0);
            k[index] = 1;
            CoefficientElement e(chart);
            e.add_term(k, Rational(1));
            return e;
        }

        static CoefficientElement variable(ChartPtr chart, const std::string& name)
        {
            std::size_t i = chart->index_of(name);
            return variable(std::move(chart), i);
        }

        /** exp(i b phi) for angle variable `index` (complex-valued unless b = 0). */
        static CoefficientElement phase(ChartPtr chart, std::size_t index, int b)
        {
            if (!chart->is_angle(index))
                throw std::invalid_argument("phase() needs an angle variable");
            TermKey k(chart->dimension(), 0);
            k[index] = b;
            CoefficientElement e(chart);
            e.add_term(k, Rational(1));
            return e;
        }

        /** cos(b phi) = (e^{ib phi} + e^{-ib phi}) / 2. */
        static CoefficientElement cos_mode(ChartPtr chart, std::size_t index, int b)
        {
            if (b == 0)
                return one(chart);
            CoefficientElement e = phase(chart, index, b) + phase(chart, index, -b);
            return e * Rational(1, 2);
        }

        /** sin(b phi) = (e^{ib phi} - e^{-ib phi}) / (2i). */
        static CoefficientElement sin_mode(ChartPtr chart, std::size_t index, int b)
        {
            CoefficientElement e = phase(chart, index, b) - phase(chart, index, -b);
            return e * GaussianRational(Rational(0), Rational(-1, 2));
        }

        static CoefficientElement monomial(ChartPtr chart, TermKey key, const GaussianRational& c)
        {
            CoefficientElement e(chart);
            e.add_term(std::move(key), c);
            return e;
        }

        const ChartPtr& chart() const { return chart_; }
        const TermMap& terms() const { return terms_; }
        bool is_zero() const { return terms_.empty(); }
        std::size_t size() const { return terms_.size(); }

        /**
         * Add c * key.  Zero coefficients are never stored.
         */
        void add_term(TermKey key, const GaussianRational& c)
        {
            validate_key(key);
            if (c.is_zero())
                return;
            auto it = terms_.find(key);
            if (it == terms_.end())
            {
                terms_.emplace(std::move(key), c);
                return;
            }
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }

        GaussianRational coefficient(const TermKey& key) const
        {
            auto it = terms_.find(key);
            return it == terms_.end() ? GaussianRational() : it->second;
        }

        /** Reality constraint: coefficient of -b is the conjugate of that of +b. */
        bool is_real() const
        {
            for (const auto& [key, c] : terms_)
            {
                TermKey mirror = key;
                for (std::size_t i = 0; i < mirror.size(); ++i)
                {
                    if (chart_->is_angle(i))
                        mirror[i] = -mirror[i];
                }
                if (coefficient(mirror) != c.conj())
                    return false;
            }
            return true;
        }

        CoefficientElement conj() const
        {
            CoefficientElement out(chart_);
            for (const auto& [key, c] : terms_)
            {
                TermKey mirror = key;
                for (std::size_t i = 0; i < mirror.size(); ++i)
                {
                    if (chart_->is_angle(i))
                        mirror[i] = -mirror[i];
                }
                out.add_term(std::move(mirror), c.conj());
            }
            return out;
        }

        /** Constant term, when the element is a constant; throws otherwise. */
        GaussianRational constant_value() const
        {
            if (terms_.empty())
                return {};
            if (terms_.size() != 1 || !is_constant())
                throw std::domain_error("element is not constant");
            return terms_.begin()->second;
        }

        bool is_constant() const
        {
            for (const auto& [key, c] : terms_)
            {
                for (int v : key)
                {
                    if (v != 0)
                        return false;
                }
            }
            return true;
        }

        /** Largest exponent (or |mode|) of variable `index` over all terms. */
        int degree_in(std::size_t index) const
        {
            int d = 0;
            for (const auto& [key, c] : terms_)
                d = std::max(d, std::abs(key[index]));
            return d;
        }

        /** Total degree in the cartesian and radial variables. */
        int polynomial_degree() const
        {
            int d = 0;
            for (const auto& [key, c] : terms_)
            {
                int s = 0;
                for (std::size_t i = 0; i < key.size(); ++i)
                {
                    if (!chart_->is_angle(i))
                        s += key[i];
                }
                d = std::max(d, s);
            }
            return d;
        }

        CoefficientElement& operator+=(const CoefficientElement& o)
        {
            adopt_chart(o, "add");
            for (const auto& [key, c] : o.terms_)
                add_term(key, c);
            return *this;
        }

        CoefficientElement& operator-=(const CoefficientElement& o)
        {
            adopt_chart(o, "subtract");
            for (const auto& [key, c] : o.terms_)
                add_term(key, -c);
            return *this;
        }

        CoefficientElement& operator*=(const GaussianRational& s)
        {
            if (s.is_zero())
            {
                terms_.clear();
                return *this;
            }
            for (auto& [key, c] : terms_)
                c *= s;
            return *this;
        }

        friend CoefficientElement operator+(CoefficientElement a, const CoefficientElement& b) { return a += b; }
        friend CoefficientElement operator-(CoefficientElement a, const CoefficientElement& b) { return a -= b; }
        friend CoefficientElement operator*(CoefficientElement a, const GaussianRational& s) { return a *= s; }
        friend CoefficientElement operator*(CoefficientElement a, const Rational& s) { return a *= GaussianRational(s); }
        friend CoefficientElement operator-(CoefficientElement a) { return a *= GaussianRational(-1); }

        friend CoefficientElement operator*(const CoefficientElement& a, const CoefficientElement& b)
        {
            require_same_chart(a.chart_, b.chart_, "multiply");
            CoefficientElement out(a.chart_);
            const std::size_t n = a.chart_->dimension();
            TermKey k(n);
            for (const auto& [ka, ca] : a.terms_)
            {
                for (const auto& [kb, cb] : b.terms_)
                {
                    for (std::size_t i = 0; i < n; ++i)
                        k[i] = ka[i] + kb[i];
                    out.add_term(k, ca * cb);
                }
            }
            return out;
        }

        CoefficientElement& operator*=(const CoefficientElement& o) { return *this = *this * o; }

        CoefficientElement pow(unsigned e) const
        {
            CoefficientElement result = one(chart_);
            CoefficientElement base = *this;
            while (e > 0)
            {
                if (e & 1U)
                    result *= base;
                e >>= 1U;
                if (e > 0)
                    base *= base;
            }
            return result;
        }

        /** Partial derivative with respect to variable `index`. */
        CoefficientElement derivative(std::size_t index) const
        {
            CoefficientElement out(chart_);
            const bool angle = chart_->is_angle(index);
            for (const auto& [key, c] : terms_)
            {
                const int e = key[index];
                if (e == 0)
                    continue;
                TermKey k = key;
                if (angle)
                {
                    out.add_term(std::move(k), c * GaussianRational(Rational(0), Rational(e)));
                }
                else
                {
                    k[index] = e - 1;
                    out.add_term(std::move(k), c * Rational(e));
                }
            }
            return out;
        }

        /**
         * Divide by the variable x_index (exact); throws if some term has
         * exponent zero in it.
         */
        CoefficientElement divide_by_variable(std::size_t index) const
        {
            if (chart_->is_angle(index))
                throw std::invalid_argument("cannot divide by an angle variable");
            CoefficientElement out(chart_);
            for (const auto& [key, c] : terms_)
            {
                if (key[index] == 0)
                    throw std::domain_error("element not divisible by '" + chart_->variable(index).name + "'");
                TermKey k = key;
                --k[index];
                out.add_term(std::move(k), c);
            }
            return out;
        }

        /** Substitute 0 for the (non-angle) variable `index`. */
        CoefficientElement at_zero(std::size_t index) const
        {
            CoefficientElement out(chart_);
            for (const auto& [key, c] : terms_)
            {
                if (key[index] == 0)
                    out.add_term(key, c);
            }
            return out;
        }

        /** Complex value at a point given in chart coordinates. */
        std::complex<double> evaluate_complex(std::span<const double> point) const
        {
            if (point.size() != chart_->dimension())
                throw std::invalid_argument("evaluate: point dimension mismatch");
            std::complex<double> sum = 0.0;
            for (const auto& [key, c] : terms_)
            {
                std::complex<double> term(c.re.get_d(), c.im.get_d());
                double phase = 0.0;
                for (std::size_t i = 0; i < key.size(); ++i)
                {
                    if (chart_->is_angle(i))
                        phase += key[i] * point[i];
                    else if (key[i] != 0)
                        term *= std::pow(point[i], key[i]);
                }
                if (phase != 0.0)
                    term *= std::polar(1.0, phase);
                sum += term;
            }
            return sum;
        }

        double evaluate(std::span<const double> point) const { return evaluate_complex(point).real(); }

        double evaluate(std::initializer_list<double> point) const
        {
            std::vector<double> p(point);
            return evaluate(std::span<const double>(p));
        }

        /** Same terms on another (structurally equal or re-labelled) chart. */
        CoefficientElement rechart(ChartPtr other) const
        {
            if (other->dimension() != chart_->dimension())
                throw std::invalid_argument("rechart: dimension mismatch");
            CoefficientElement out(std::move(other));
            out.terms_ = terms_;
            return out;
        }

        friend bool operator==(const CoefficientElement& a, const CoefficientElement& b)
        {
            if (a.is_zero() && b.is_zero())
                return true;
            return same_chart(a.chart_, b.chart_) && a.terms_ == b.terms_;
        }

        /**
         * Canonical text: terms in key order, "coef*var^e*e^{ib var}".
         */
        std::string str() const
        {
            if (terms_.empty())
                return "0";
            std::string s;
            bool first = true;
            for (const auto& [key, c] : terms_)
            {
                if (!first)
                    s += " + ";
                first = false;
                s += c.str();
                for (std::size_t i = 0; i < key.size(); ++i)
                {
                    if (key[i] == 0)
                        continue;
                    const auto& name = chart_->variable(i).name;
                    if (chart_->is_angle(i))
                        s += "*e^{" + std::to_string(key[i]) + "i" + name + "}";
                    else if (key[i] == 1)
                        s += "*" + name;
                    else
                        s += "*" + name + "^" + std::to_string(key[i]);
                }
            }
            return s;
        }

    private:
        void validate_key(const TermKey& key) const
        {
            if (!chart_)
                throw std::logic_error("coefficient element without chart");
            if (key.size() != chart_->dimension())
                throw std::invalid_argument("term key has wrong length");
            for (std::size_t i = 0; i < key.size(); ++i)
            {
                if (!chart_->is_angle(i) && key[i] < 0)
                    throw std::invalid_argument("negative exponent for variable '" + chart_->variable(i).name + "'");
            }
        }

        void adopt_chart(const CoefficientElement& o, const char* op)
        {
            if (!chart_)
            {
                chart_ = o.chart_;
                return;
            }
            if (o.chart_)
                require_same_chart(chart_, o.chart_, op);
        }

        ChartPtr chart_;
        TermMap terms_;
};

}   // namespace conex

#endif
