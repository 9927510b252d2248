// Brute-force span oracle for smooth-structure membership on latitude cones.
//
// The smooth functions of the cone over z = theta that are polynomial in the
// generators are spanned by products of t cos(phi), t sin(phi) and, when
// theta != 0, t (constant factors dropped).  A product of d generators is
// homogeneous of radial degree d, so membership of t^a * (trig polynomial)
// is a rank question inside the degree-a products.

#ifndef CONEX_TESTS_MEMBERSHIP_ORACLE_HPP
#define CONEX_TESTS_MEMBERSHIP_ORACLE_HPP

#include "oracles.hpp"

#include <map>
#include <set>
#include <vector>

namespace oracle {

/** Real trig polynomial as coordinates (c0, cos 1, sin 1, ..., cos B, sin B). */
using TrigVector = std::vector<Rational>;

class GeneratorSpan
{
    public:
        GeneratorSpan(bool with_t, int max_degree, int max_mode) : max_mode_(max_mode)
        {
            // products[a] = all monomials in the generators of degree a
            std::vector<std::vector<std::map<int, conex::GaussianRational>>> products(max_degree + 1);
            products[0].push_back({{0, conex::GaussianRational(1)}});
            const conex::GaussianRational half(Rational(1, 2));
            const conex::GaussianRational half_i(Rational(0), Rational(-1, 2));
            std::vector<std::map<int, conex::GaussianRational>> gens{
                {{1, half}, {-1, half}},                           // cos
                {{1, half_i}, {-1, half_i * conex::GaussianRational(-1)}},   // sin
            };
            if (with_t)
                gens.push_back({{0, conex::GaussianRational(1)}});
            for (int a = 1; a <= max_degree; ++a)
            {
                for (const auto& p : products[a - 1])
                {
                    for (const auto& g : gens)
                    {
                        std::map<int, conex::GaussianRational> q;
                        for (const auto& [b1, c1] : p)
                        {
                            for (const auto& [b2, c2] : g)
                                q[b1 + b2] += c1 * c2;
                        }
                        products[a].push_back(std::move(q));
                    }
                }
            }
            for (const auto& level : products)
            {
                std::set<TrigVector> distinct;
                for (const auto& p : level)
                    distinct.insert(to_vector(p));
                std::vector<TrigVector> rows(distinct.begin(), distinct.end());
                rank_.push_back(dense_rank(rows));
                rows_.push_back(std::move(rows));
            }
        }

        TrigVector to_vector(const std::map<int, conex::GaussianRational>& modes) const
        {
            TrigVector v(2 * max_mode_ + 1, 0);
            for (const auto& [b, c] : modes)
            {
                if (c.is_zero())
                    continue;
                if (std::abs(b) > max_mode_)
                    throw std::out_of_range("mode beyond oracle range");
                if (b == 0)
                    v[0] += c.re;
                else if (b > 0)
                {
                    // c e^{ib} + conj(c) e^{-ib} = 2 Re c cos - 2 Im c sin
                    v[2 * b - 1] += 2 * c.re;
                    v[2 * b] += -2 * c.im;
                }
            }
            return v;
        }

        /** Is t^a * f(phi) in the span?  f given by its modes. */
        bool contains(int a, const std::map<int, conex::GaussianRational>& modes) const
        {
            if (a >= static_cast<int>(rows_.size()))
                throw std::out_of_range("radial degree beyond oracle range");
            auto rows = rows_[a];
            rows.push_back(to_vector(modes));
            return dense_rank(rows) == rank_[a];
        }

    private:
        int max_mode_;
        std::vector<std::vector<TrigVector>> rows_;
        std::vector<std::size_t> rank_;
};

}   // namespace oracle

#endif
