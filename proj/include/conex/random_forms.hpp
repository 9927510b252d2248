/**
 * Seeded random polynomial forms for property checks.
 */

#ifndef CONEX_RANDOM_FORMS_HPP
#define CONEX_RANDOM_FORMS_HPP

#include "forms.hpp"

#include <algorithm>
#include <cstdint>
#include <random>

namespace conex {

class FormGenerator
{
    public:
        FormGenerator(ChartPtr chart, std::uint64_t seed, int max_degree = 6, int max_terms = 4)
            : chart_(std::move(chart)), rng_(seed), max_degree_(max_degree), max_terms_(max_terms)
        {
        }

        Rational coefficient()
        {
            std::uniform_int_distribution<long> num(-9, 9);
            std::uniform_int_distribution<long> den(1, 4);
            long n = 0;
            while (n == 0)
                n = num(rng_);
            return ratio(n, den(rng_));
        }

        /** Real polynomial with at most max_terms monomials of degree <= max_degree. */
        CoefficientElement polynomial()
        {
            CoefficientElement f = CoefficientElement::zero(chart_);
            std::uniform_int_distribution<int> terms(1, max_terms_);
            std::uniform_int_distribution<int> deg(0, max_degree_);
            std::uniform_int_distribution<std::size_t> var(0, chart_->dimension() - 1);
            const int count = terms(rng_);
            for (int k = 0; k < count; ++k)
            {
                TermKey key(chart_->dimension(), 0);
                const int d = deg(rng_);
                for (int j = 0; j < d; ++j)
                    ++key[var(rng_)];
                f.add_term(std::move(key), coefficient());
            }
            return f;
        }

        /** Random p-form with 1..3 nonzero components. */
        DifferentialForm form(int p)
        {
            DifferentialForm a(chart_, p);
            const std::size_t n = chart_->dimension();
            std::uniform_int_distribution<int> comps(1, 3);
            const int count = comps(rng_);
            for (int k = 0; k < count; ++k)
            {
                std::vector<std::size_t> idx(n);
                for (std::size_t i = 0; i < n; ++i)
                    idx[i] = i;
                std::shuffle(idx.begin(), idx.end(), rng_);
                IndexMask m = 0;
                for (int j = 0; j < p; ++j)
                    m |= IndexMask(1) << idx[j];
                a.add_component(m, polynomial());
            }
            return a;
        }

        /** Form of random degree 0..dim. */
        DifferentialForm form()
        {
            std::uniform_int_distribution<int> deg(0, static_cast<int>(chart_->dimension()));
            return form(deg(rng_));
        }

        std::mt19937_64& engine() { return rng_; }

    private:
        ChartPtr chart_;
        std::mt19937_64 rng_;
        int max_degree_;
        int max_terms_;
};

}   // namespace conex

#endif
