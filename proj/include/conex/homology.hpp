/**
 * Truncated polynomial form complexes on R^{2n} (de Rham d or Brylinski
 * delta), optionally restricted to the invariants of a finite symplectic
 * group action, and their homology ranks over Q.
 *
 * Truncation.  Give x_i and dx_i weight 1.  d preserves the total weight
 * P + p (P = polynomial degree, p = form degree), so {P + p <= D} is a
 * d-subcomplex and each weight piece W > 0 is acyclic.  delta maps
 * (P, p) -> (P - 1, p - 1); its subcomplex is the star image of the de Rham
 * one, {P + (2n - p) <= D}.  Truncation::coefficient_degree ({P <= D} for
 * every p) is also a subcomplex but carries spurious top classes.
 */

#ifndef CONEX_HOMOLOGY_HPP
#define CONEX_HOMOLOGY_HPP

#include "linalg.hpp"
#include "poisson.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace conex {

/**
 * Cyclic group Z_k generated by a chart self-map.
 */
class GroupAction
{
    public:
        GroupAction(std::size_t order, ChartMap generator) : order_(order), generator_(std::move(generator))
        {
            if (order_ < 1)
                throw std::invalid_argument("group order must be >= 1");
            if (!same_chart(generator_.source(), generator_.target()))
                throw std::invalid_argument("group generator must map a chart to itself");
            if (!generator_has_order())
                throw std::invalid_argument("generator^" + std::to_string(order_) + " is not the identity");
        }

        std::size_t order() const { return order_; }
        const ChartMap& generator() const { return generator_; }
        const ChartPtr& chart() const { return generator_.source(); }

        DifferentialForm pull(const DifferentialForm& a, std::size_t times = 1) const
        {
            DifferentialForm out = a;
            for (std::size_t j = 0; j < times; ++j)
                out = pullback(generator_, out);
            return out;
        }

        bool preserves(const DifferentialForm& a) const { return pull(a) == a; }

        /**
         * Group average (1/k) sum_j (g^j)^* a.  Pure angle rotations are
         * averaged by keeping the Fourier modes fixed by the rotation, which
         * needs no roots of unity.
         */
        DifferentialForm average(const DifferentialForm& a) const
        {
            if (generator_.is_pure_rotation())
                return rotation_average(a);
            DifferentialForm sum = DifferentialForm::zero(a.chart(), a.degree());
            DifferentialForm cur = a;
            for (std::size_t j = 0; j < order_; ++j)
            {
                sum += cur;
                cur = pullback(generator_, cur);
            }
            return sum * Rational(1, static_cast<long>(order_));
        }

        bool is_invariant(const DifferentialForm& a) const { return average(a) == a; }

    private:
        bool generator_has_order() const
        {
            const auto& chart = generator_.source();
            for (std::size_t k = 0; k < chart->dimension(); ++k)
            {
                if (chart->is_angle(k))
                {
                    std::size_t idx = k;
                    int sign = 1;
                    Rational turn = 0;
                    for (std::size_t j = 0; j < order_; ++j)
                    {
                        const auto* s = std::get_if<AngleShift>(&generator_.components()[idx]);
                        if (!s)
                            return false;
                        turn += sign * s->turn;
                        sign *= s->sign;
                        idx = s->source_index;
                    }
                    if (idx != k || sign != 1 || turn.get_den() != 1)
                        return false;
                    continue;
                }
                DifferentialForm x = DifferentialForm::function(CoefficientElement::variable(chart, k));
                if (!(pull(x, order_) == x))
                    return false;
            }
            return true;
        }

        DifferentialForm rotation_average(const DifferentialForm& a) const
        {
            const auto& chart = generator_.source();
            std::vector<Rational> turn(chart->dimension(), 0);
            for (std::size_t k = 0; k < chart->dimension(); ++k)
            {
                if (const auto* s = std::get_if<AngleShift>(&generator_.components()[k]))
                    turn[k] = s->turn;
            }
            DifferentialForm out = DifferentialForm::zero(a.chart(), a.degree());
            for (const auto& [m, c] : a.components())
            {
                CoefficientElement kept = CoefficientElement::zero(chart);
                for (const auto& [key, coef] : c.terms())
                {
                    Rational phase = 0;
                    for (std::size_t k = 0; k < key.size(); ++k)
                        phase += turn[k] * key[k];
                    if (phase.get_den() == 1)
                        kept.add_term(key, coef);
                }
                out.add_component(m, kept);
            }
            return out;
        }

        std::size_t order_;
        ChartMap generator_;
};

/**
 * Z_k acting on R^{2n} by the same order-k matrix in SL(2, Z) on every
 * (x_i, y_i) plane.  Each such matrix is conjugate in SL(2, R) to the
 * rotation by 2 pi / k, preserves omega, and fixes only the origin.
 */
inline GroupAction planar_rotation_action(const SymplecticChart& s, std::size_t k)
{
    std::vector<std::vector<Rational>> block;
    switch (k)
    {
        case 1: block = {{1, 0}, {0, 1}}; break;
        case 2: block = {{-1, 0}, {0, -1}}; break;
        case 3: block = {{0, -1}, {1, -1}}; break;
        case 4: block = {{0, -1}, {1, 0}}; break;
        case 6: block = {{1, -1}, {1, 0}}; break;
        default:
            throw std::invalid_argument("Z_" + std::to_string(k)
                                        + " has no rational symplectic plane representation (k in {1,2,3,4,6})");
    }
    const std::size_t dim = s.dimension();
    std::vector<std::vector<Rational>> m(dim, std::vector<Rational>(dim, 0));
    for (int i = 1; i <= s.n; ++i)
    {
        const std::size_t x = s.x_index(i);
        const std::size_t y = s.y_index(i);
        m[x][x] = block[0][0];
        m[x][y] = block[0][1];
        m[y][x] = block[1][0];
        m[y][y] = block[1][1];
    }
    return GroupAction(k, ChartMap::linear(s.chart, m));
}

enum class ComplexOperator
{
    delta,
    de_rham
};

enum class Truncation
{
    total_degree,
    coefficient_degree
};

inline std::string to_string(ComplexOperator op)
{
    return op == ComplexOperator::delta ? "delta" : "deRham";
}

/**
 * One form degree of a truncated complex: a basis of forms and the matrix of
 * the operator out of this degree (columns = this basis, rows = basis of the
 * target degree).
 */
struct ComplexStratum
{
    int degree = 0;
    int target_degree = 0;
    std::vector<DifferentialForm> basis;
    SparseMatrix boundary;
    std::size_t rank = 0;
};

namespace detail {

using MonomialFormKey = std::pair<IndexMask, TermKey>;

/** Exponent vectors of total degree exactly `d` in `vars` variables, lex order. */
inline void enumerate_exponents(std::size_t vars, int d, std::vector<TermKey>& out)
{
    TermKey cur(vars, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == vars)
        {
            cur[i] = left;
            out.push_back(cur);
            return;
        }
        for (int e = left; e >= 0; --e)
        {
            cur[i] = e;
            rec(i + 1, left - e);
        }
    };
    rec(0, d);
}

inline int coefficient_bound(const SymplecticChart& s, ComplexOperator op, Truncation tr, int D, int p)
{
    if (tr == Truncation::coefficient_degree)
        return D;
    const int dim = static_cast<int>(s.dimension());
    return op == ComplexOperator::de_rham ? D - p : D - (dim - p);
}

/** Monomial p-forms grouped by exact polynomial degree. */
inline std::map<int, std::vector<MonomialFormKey>> monomial_pieces(const SymplecticChart& s, int p, int bound)
{
    std::map<int, std::vector<MonomialFormKey>> pieces;
    const std::size_t dim = s.dimension();
    const IndexMask full = (IndexMask(1) << dim) - 1;
    for (int P = 0; P <= bound; ++P)
    {
        std::vector<TermKey> exps;
        enumerate_exponents(dim, P, exps);
        for (IndexMask m = 0; m <= full; ++m)
        {
            if (std::popcount(m) != p)
                continue;
            for (const auto& e : exps)
                pieces[P].emplace_back(m, e);
        }
    }
    return pieces;
}

inline DifferentialForm monomial_form(const SymplecticChart& s, const MonomialFormKey& k)
{
    DifferentialForm a(s.chart, std::popcount(k.first));
    a.add_component(k.first, CoefficientElement::monomial(s.chart, k.second, Rational(1)));
    return a;
}

inline void add_coordinates(const DifferentialForm& a, const std::map<MonomialFormKey, std::size_t>& index,
                            std::map<std::size_t, Rational>& out)
{
    for (const auto& [m, c] : a.components())
    {
        for (const auto& [key, coef] : c.terms())
        {
            if (!coef.is_real())
                throw std::domain_error("complex coefficient in a real complex");
            auto it = index.find({m, key});
            if (it == index.end())
                throw std::logic_error("operator image leaves the truncated complex");
            Rational& slot = out[it->second];
            slot += coef.re;
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
}

/** A basis of one form degree together with coordinates for its span. */
struct StratumBasis
{
    std::vector<DifferentialForm> forms;
    std::map<MonomialFormKey, std::size_t> monomial_index;   // all monomials of the degree
    // invariant case: basis vectors in monomial coordinates, pivot monomial per vector
    std::vector<std::map<std::size_t, Rational>> vectors;
    std::vector<std::size_t> pivots;
    bool monomial = true;
};

inline StratumBasis build_basis(const SymplecticChart& s, int p, int bound, const GroupAction* action)
{
    StratumBasis b;
    auto pieces = monomial_pieces(s, p, bound);
    std::size_t next = 0;
    for (const auto& [P, keys] : pieces)
    {
        for (const auto& k : keys)
            b.monomial_index.emplace(k, next++);
    }
    if (!action)
    {
        for (const auto& [P, keys] : pieces)
        {
            for (const auto& k : keys)
                b.forms.push_back(monomial_form(s, k));
        }
        return b;
    }
    b.monomial = false;
    for (const auto& [P, keys] : pieces)
    {
        // Local coordinates within this homogeneous piece.
        std::map<MonomialFormKey, std::size_t> local;
        for (std::size_t i = 0; i < keys.size(); ++i)
            local.emplace(keys[i], i);
        std::vector<std::vector<Rational>> rows;
        for (const auto& k : keys)
        {
            DifferentialForm avg = action->average(monomial_form(s, k));
            std::map<std::size_t, Rational> coords;
            add_coordinates(avg, local, coords);
            std::vector<Rational> dense(keys.size(), 0);
            for (const auto& [i, v] : coords)
                dense[i] = v;
            rows.push_back(std::move(dense));
        }
        std::vector<std::size_t> piv;
        auto rref = reduced_row_echelon(std::move(rows), &piv);
        for (std::size_t r = 0; r < rref.size(); ++r)
        {
            DifferentialForm form(s.chart, p);
            std::map<std::size_t, Rational> vec;
            for (std::size_t i = 0; i < keys.size(); ++i)
            {
                if (sgn(rref[r][i]) == 0)
                    continue;
                vec.emplace(b.monomial_index.at(keys[i]), rref[r][i]);
                form.add_component(keys[i].first,
                                   CoefficientElement::monomial(s.chart, keys[i].second, rref[r][i]));
            }
            b.forms.push_back(std::move(form));
            b.vectors.push_back(std::move(vec));
            b.pivots.push_back(b.monomial_index.at(keys[piv[r]]));
        }
    }
    return b;
}

/** Coordinates of `a` in the basis; throws when `a` is outside its span. */
inline std::map<std::size_t, Rational> basis_coordinates(const StratumBasis& b, const DifferentialForm& a)
{
    std::map<std::size_t, Rational> mono;
    add_coordinates(a, b.monomial_index, mono);
    if (b.monomial)
        return mono;
    std::map<std::size_t, Rational> coords;
    std::map<std::size_t, Rational> residual = mono;
    for (std::size_t r = 0; r < b.vectors.size(); ++r)
    {
        auto it = mono.find(b.pivots[r]);
        if (it == mono.end())
            continue;
        const Rational c = it->second;
        coords.emplace(r, c);
        for (const auto& [i, v] : b.vectors[r])
        {
            Rational& slot = residual[i];
            slot -= c * v;
        }
    }
    for (const auto& [i, v] : residual)
    {
        if (sgn(v) != 0)
            throw std::logic_error("operator image leaves the invariant subcomplex");
    }
    return coords;
}

}   // namespace detail

/**
 * Build the truncated complex for degrees p = 0..2n.  Stratum p carries the
 * matrix of d (p -> p+1) or delta (p -> p-1).
 */
inline std::vector<ComplexStratum> build_stratified_complex(const SymplecticChart& s, int D, ComplexOperator op,
                                                            const GroupAction* action = nullptr,
                                                            Truncation truncation = Truncation::total_degree)
{
    if (D < 0)
        throw std::invalid_argument("truncation degree must be >= 0");
    if (action)
    {
        require_same_chart(action->chart(), s.chart, "build_stratified_complex");
        if (!action->preserves(s.omega))
            throw std::invalid_argument("group action does not preserve omega");
    }
    const int dim = static_cast<int>(s.dimension());
    std::vector<detail::StratumBasis> bases;
    for (int p = 0; p <= dim; ++p)
        bases.push_back(detail::build_basis(s, p, detail::coefficient_bound(s, op, truncation, D, p), action));

    std::vector<ComplexStratum> strata;
    for (int p = 0; p <= dim; ++p)
    {
        ComplexStratum st;
        st.degree = p;
        st.target_degree = op == ComplexOperator::de_rham ? p + 1 : p - 1;
        st.basis = bases[p].forms;
        const bool has_target = st.target_degree >= 0 && st.target_degree <= dim;
        const std::size_t rows = has_target ? bases[st.target_degree].forms.size() : 0;
        st.boundary = SparseMatrix(rows, st.basis.size());
        if (has_target)
        {
            for (std::size_t j = 0; j < st.basis.size(); ++j)
            {
                DifferentialForm image = op == ComplexOperator::de_rham ? exterior_derivative(st.basis[j])
                                                                        : brylinski_delta(st.basis[j], s);
                for (const auto& [i, v] : detail::basis_coordinates(bases[st.target_degree], image))
                    st.boundary.add(i, j, v);
            }
        }
        st.rank = rank(st.boundary);
        strata.push_back(std::move(st));
    }
    return strata;
}

/**
 * Homology rank per form degree: dim - rank(out) - rank(in).  Rejects input
 * whose consecutive boundary maps do not compose to zero.
 */
inline std::vector<std::size_t> homology_ranks(const std::vector<ComplexStratum>& strata)
{
    std::map<int, const ComplexStratum*> by_degree;
    for (const auto& st : strata)
        by_degree[st.degree] = &st;
    std::map<int, std::size_t> incoming;
    for (const auto& st : strata)
    {
        auto it = by_degree.find(st.target_degree);
        if (it == by_degree.end())
        {
            if (st.boundary.rows() != 0 && st.rank != 0)
                throw std::invalid_argument("boundary into a missing degree");
            continue;
        }
        const ComplexStratum& next = *it->second;
        if (st.boundary.rows() != next.basis.size())
            throw std::invalid_argument("boundary row count does not match target basis");
        if (!(next.boundary * st.boundary).is_zero())
            throw std::invalid_argument("not a complex: consecutive boundaries compose to nonzero ("
                                        + std::to_string(st.degree) + " -> " + std::to_string(next.degree) + ")");
        incoming[st.target_degree] += st.rank;
    }
    std::vector<std::size_t> out;
    for (const auto& [p, st] : by_degree)
    {
        const std::size_t dim = st->basis.size();
        const std::size_t used = st->rank + incoming[p];
        if (used > dim)
            throw std::logic_error("rank exceeds dimension");
        out.push_back(dim - used);
    }
    return out;
}

}   // namespace conex

#endif
