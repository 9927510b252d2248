/**
 * Exact real-root analysis of real trigonometric polynomials in one angle.
 *
 * T(phi) = sum_b c_b e^{i b phi} is mapped by u = tan(phi / 2) to
 *   Q(u) = T(phi) (1 + u^2)^N = sum_b c_b (1 + iu)^{N+b} (1 - iu)^{N-b},
 * N = max |b|.  Zeros of T on (-pi, pi) correspond to real roots of Q;
 * phi = pi is checked directly.  Real roots of Q are counted with Sturm
 * sequences and isolated by bisection.
 */

#ifndef CONEX_TRIG_ROOTS_HPP
#define CONEX_TRIG_ROOTS_HPP

#include "coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace conex {

/** Univariate polynomial over Q, coefficients from degree 0 upwards. */
class Polynomial
{
    public:
        Polynomial() = default;
        explicit Polynomial(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

        static Polynomial constant(const Rational& a) { return Polynomial({a}); }

        bool is_zero() const { return c_.empty(); }
        int degree() const { return static_cast<int>(c_.size()) - 1; }
        const std::vector<Rational>& coefficients() const { return c_; }
        Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

        Rational operator()(const Rational& x) const
        {
            Rational v = 0;
            for (auto it = c_.rbegin(); it != c_.rend(); ++it)
                v = v * x + *it;
            return v;
        }

        double evaluate(double x) const
        {
            double v = 0.0;
            for (auto it = c_.rbegin(); it != c_.rend(); ++it)
                v = v * x + it->get_d();
            return v;
        }

        Polynomial derivative() const
        {
            std::vector<Rational> d;
            for (std::size_t i = 1; i < c_.size(); ++i)
                d.push_back(c_[i] * static_cast<long>(i));
            return Polynomial(std::move(d));
        }

        /** Remainder of division by a nonzero polynomial. */
        Polynomial remainder(const Polynomial& q) const
        {
            if (q.is_zero())
                throw std::invalid_argument("polynomial division by zero");
            std::vector<Rational> r = c_;
            const std::size_t dq = q.c_.size() - 1;
            while (r.size() > dq && !r.empty())
            {
                const Rational f = r.back() / q.c_.back();
                const std::size_t shift = r.size() - 1 - dq;
                for (std::size_t i = 0; i <= dq; ++i)
                    r[shift + i] -= f * q.c_[i];
                r.pop_back();
                while (!r.empty() && sgn(r.back()) == 0)
                    r.pop_back();
            }
            return Polynomial(std::move(r));
        }

        friend Polynomial operator-(const Polynomial& p)
        {
            std::vector<Rational> c = p.c_;
            for (auto& a : c)
                a = -a;
            return Polynomial(std::move(c));
        }

        friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    private:
        void trim()
        {
            while (!c_.empty() && sgn(c_.back()) == 0)
                c_.pop_back();
        }

        std::vector<Rational> c_;
};

inline std::vector<Polynomial> sturm_sequence(const Polynomial& p)
{
    std::vector<Polynomial> seq;
    if (p.is_zero())
        return seq;
    seq.push_back(p);
    Polynomial d = p.derivative();
    while (!d.is_zero())
    {
        seq.push_back(d);
        d = -seq[seq.size() - 2].remainder(seq.back());
    }
    return seq;
}

namespace detail {

inline int sign_changes(const std::vector<int>& signs)
{
    int changes = 0;
    int last = 0;
    for (int s : signs)
    {
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

inline int changes_at(const std::vector<Polynomial>& seq, const Rational& x)
{
    std::vector<int> signs;
    for (const auto& p : seq)
        signs.push_back(sgn(p(x)));
    return sign_changes(signs);
}

inline int changes_at_infinity(const std::vector<Polynomial>& seq, bool positive)
{
    std::vector<int> signs;
    for (const auto& p : seq)
    {
        int s = sgn(p.leading());
        if (!positive && p.degree() % 2 != 0)
            s = -s;
        signs.push_back(s);
    }
    return sign_changes(signs);
}

/** 1 + max |a_i / a_n|: every real root lies strictly inside (-B, B). */
inline Rational cauchy_bound(const Polynomial& p)
{
    Rational m = 0;
    const auto& c = p.coefficients();
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
    {
        Rational r = abs(c[i] / c.back());
        if (r > m)
            m = r;
    }
    return m + 1;
}

}   // namespace detail

/** Number of distinct real roots of a nonzero polynomial. */
inline int count_real_roots(const Polynomial& p)
{
    if (p.is_zero())
        throw std::invalid_argument("zero polynomial has infinitely many roots");
    auto seq = sturm_sequence(p);
    return detail::changes_at_infinity(seq, false) - detail::changes_at_infinity(seq, true);
}

/**
 * Disjoint intervals (a, b], each holding exactly one distinct real root,
 * with b - a <= width.
 */
inline std::vector<std::pair<Rational, Rational>> isolate_real_roots(const Polynomial& p, const Rational& width)
{
    std::vector<std::pair<Rational, Rational>> out;
    if (p.is_zero())
        throw std::invalid_argument("zero polynomial has infinitely many roots");
    if (p.degree() == 0)
        return out;
    const auto seq = sturm_sequence(p);
    const Rational B = detail::cauchy_bound(p);
    // count(a, b] = V(a) - V(b), valid whenever p(a) != 0.
    std::vector<std::pair<Rational, Rational>> stack{{-B, B}};
    while (!stack.empty())
    {
        auto [a, b] = stack.back();
        stack.pop_back();
        const int n = detail::changes_at(seq, a) - detail::changes_at(seq, b);
        if (n == 0)
            continue;
        if (n == 1 && b - a <= width)
        {
            out.emplace_back(a, b);
            continue;
        }
        Rational m = (a + b) / 2;
        for (int k = 3; sgn(p(m)) == 0; ++k)
            m = a + (b - a) * ratio(k - 1, 2 * k);   // shift off an exact root
        stack.emplace_back(m, b);
        stack.emplace_back(a, m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/** Real trigonometric polynomial in the angle variable `index` of its chart. */
struct TrigPolynomial
{
    std::map<int, GaussianRational> modes;   // b -> c_b

    static TrigPolynomial from(const CoefficientElement& f, std::size_t index)
    {
        TrigPolynomial t;
        if (f.is_zero())
            return t;
        if (!f.chart()->is_angle(index))
            throw std::invalid_argument("trig polynomial needs an angle variable");
        for (const auto& [key, c] : f.terms())
        {
            for (std::size_t k = 0; k < key.size(); ++k)
            {
                if (k != index && key[k] != 0)
                    throw std::invalid_argument("trig polynomial depends on a second variable");
            }
            t.modes[key[index]] += c;
        }
        for (const auto& [b, c] : t.modes)
        {
            auto it = t.modes.find(-b);
            if (it == t.modes.end() ? !c.is_zero() : !(it->second == c.conj()))
                throw std::invalid_argument("trig polynomial is not real");
        }
        return t;
    }

    bool is_zero() const
    {
        for (const auto& [b, c] : modes)
        {
            if (!c.is_zero())
                return false;
        }
        return true;
    }

    int order() const
    {
        int n = 0;
        for (const auto& [b, c] : modes)
        {
            if (!c.is_zero())
                n = std::max(n, std::abs(b));
        }
        return n;
    }

    /** Exact value at phi = pi. */
    Rational at_pi() const
    {
        GaussianRational v(0);
        for (const auto& [b, c] : modes)
            v = v + (b % 2 == 0 ? c : c * GaussianRational(-1));
        return v.re;
    }

    double evaluate(double phi) const
    {
        double v = 0.0;
        for (const auto& [b, c] : modes)
            v += c.re.get_d() * std::cos(b * phi) - c.im.get_d() * std::sin(b * phi);
        return v;
    }

    /** Q(u) with T(phi) (1 + u^2)^N = Q(tan(phi / 2)). */
    Polynomial half_angle() const
    {
        const int N = order();
        std::vector<GaussianRational> acc(2 * N + 1, GaussianRational(0));
        // (1 + iu)^m and (1 - iu)^m coefficient lists.
        auto binomial_power = [](int m, int sign) {
            std::vector<GaussianRational> c(m + 1, GaussianRational(0));
            Integer binom = 1;
            for (int k = 0; k <= m; ++k)
            {
                c[k] = GaussianRational(Rational(binom)) * i_power(k) * GaussianRational(k % 2 == 0 ? 1 : sign);
                binom = binom * (m - k) / (k + 1);
            }
            return c;
        };
        for (const auto& [b, c] : modes)
        {
            if (c.is_zero())
                continue;
            auto plus = binomial_power(N + b, 1);
            auto minus = binomial_power(N - b, -1);
            for (std::size_t i = 0; i < plus.size(); ++i)
            {
                for (std::size_t j = 0; j < minus.size(); ++j)
                    acc[i + j] = acc[i + j] + c * plus[i] * minus[j];
            }
        }
        std::vector<Rational> re;
        for (const auto& z : acc)
        {
            if (sgn(z.im) != 0)
                throw std::logic_error("half-angle image is not real");
            re.push_back(z.re);
        }
        return Polynomial(std::move(re));
    }
};

inline double angle_from_half_tangent(double u)
{
    double phi = 2.0 * std::atan(u);
    if (phi < 0)
        phi += 2.0 * std::numbers::pi;
    return phi;
}

/** Number of distinct zeros of a nonzero real trig polynomial on [0, 2 pi). */
inline int count_trig_zeros(const TrigPolynomial& t)
{
    if (t.is_zero())
        throw std::invalid_argument("zero trig polynomial vanishes everywhere");
    return count_real_roots(t.half_angle()) + (sgn(t.at_pi()) == 0 ? 1 : 0);
}

/** Approximate zeros on [0, 2 pi), sorted, each within `width` in u = tan(phi/2). */
inline std::vector<double> trig_zeros(const TrigPolynomial& t, const Rational& width = Rational(1, 1 << 30))
{
    if (t.is_zero())
        throw std::invalid_argument("zero trig polynomial vanishes everywhere");
    std::vector<double> out;
    for (const auto& [a, b] : isolate_real_roots(t.half_angle(), width))
        out.push_back(angle_from_half_tangent(Rational((a + b) / 2).get_d()));
    if (sgn(t.at_pi()) == 0)
        out.push_back(std::numbers::pi);
    std::sort(out.begin(), out.end());
    return out;
}

struct NonvanishingResult
{
    bool nonvanishing = false;
    std::optional<double> witness_angle;   // a zero of T when it vanishes somewhere
    int sign = 0;                           // sign of T when nonvanishing
};

/** Decide exactly whether T has no zero on the circle. */
inline NonvanishingResult trig_nonvanishing(const TrigPolynomial& t)
{
    NonvanishingResult r;
    if (t.is_zero())
    {
        r.witness_angle = 0.0;
        return r;
    }
    auto zeros = trig_zeros(t);
    if (!zeros.empty())
    {
        r.witness_angle = zeros.front();
        return r;
    }
    r.nonvanishing = true;
    r.sign = sgn(t.at_pi());
    return r;
}

}   // namespace conex

#endif
