/**
 * Exact scalar types: rationals (GMP) and Gaussian rationals.
 */

#ifndef CONEX_RATIONAL_HPP
#define CONEX_RATIONAL_HPP

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace conex {

using Rational = mpq_class;
using Integer = mpz_class;

/** n / d in lowest terms (mpq_class(n, d) alone does not reduce). */
inline Rational ratio(long n, long d)
{
    if (d == 0)
        throw std::invalid_argument("zero denominator");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

/**
 * Parse "p", "p/q" or "-p/q" into a canonical rational.
 */
inline Rational parse_rational(std::string_view text)
{
    if (text.empty())
        throw std::invalid_argument("empty rational literal");
    for (char c : text)
    {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
            throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    }
    std::string s(text);
    if (s.front() == '+')
        s.erase(0, 1);
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q)
{
    return q.get_str();
}

/**
 * Element of Q(i).  Used for Fourier coefficients of angle-dependent terms.
 */
struct GaussianRational
{
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)), im(0) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r), im(0) {}
    GaussianRational(int r) : re(r), im(0) {}

    static GaussianRational i_unit() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    GaussianRational conj() const { return {re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o)
    {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GaussianRational& operator*=(const Rational& q)
    {
        re *= q;
        im *= q;
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator*(GaussianRational a, const Rational& q) { return a *= q; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }

    GaussianRational inverse() const
    {
        Rational n = re * re + im * im;
        if (sgn(n) == 0)
            throw std::domain_error("division by zero Gaussian rational");
        return {re / n, -im / n};
    }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b)
    {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    std::string str() const
    {
        if (sgn(im) == 0)
            return re.get_str();
        if (sgn(re) == 0)
            return im.get_str() + "i";
        std::string s = "(" + re.get_str();
        s += (sgn(im) > 0 ? "+" : "");
        s += im.get_str() + "i)";
        return s;
    }
};

/** i^k for any integer k. */
inline GaussianRational i_power(long k)
{
    switch (((k % 4) + 4) % 4)
    {
        case 0: return {Rational(1), Rational(0)};
        case 1: return {Rational(0), Rational(1)};
        case 2: return {Rational(-1), Rational(0)};
        default: return {Rational(0), Rational(-1)};
    }
}

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& z)
{
    return os << z.str();
}

}   // namespace conex

#endif
