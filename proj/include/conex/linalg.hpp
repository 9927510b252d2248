/**
 * Exact sparse linear algebra over Q.
 *
 * Rank is computed by splitting the matrix into the connected components of
 * its row/column incidence graph (a permutation to block-diagonal form) and
 * running fraction-free (Bareiss) elimination on each dense block.
 */

#ifndef CONEX_LINALG_HPP
#define CONEX_LINALG_HPP

#include "rational.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace conex {

class SparseMatrix
{
    public:
        SparseMatrix() = default;
        SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }

        void add(std::size_t r, std::size_t c, const Rational& v)
        {
            if (r >= rows_ || c >= cols_)
                throw std::out_of_range("sparse matrix index out of range");
            if (sgn(v) == 0)
                return;
            auto& row = data_[r];
            auto it = row.find(c);
            if (it == row.end())
            {
                row.emplace(c, v);
                return;
            }
            it->second += v;
            if (sgn(it->second) == 0)
                row.erase(it);
        }

        Rational at(std::size_t r, std::size_t c) const
        {
            auto it = data_.at(r).find(c);
            return it == data_[r].end() ? Rational(0) : it->second;
        }

        const std::map<std::size_t, Rational>& row(std::size_t r) const { return data_.at(r); }

        std::size_t nonzeros() const
        {
            std::size_t n = 0;
            for (const auto& r : data_)
                n += r.size();
            return n;
        }

        bool is_zero() const { return nonzeros() == 0; }

        friend bool operator==(const SparseMatrix& a, const SparseMatrix& b)
        {
            return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
        }

        friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b)
        {
            if (a.cols_ != b.rows_)
                throw std::invalid_argument("matrix product: shape mismatch");
            SparseMatrix out(a.rows_, b.cols_);
            for (std::size_t r = 0; r < a.rows_; ++r)
            {
                for (const auto& [k, v] : a.data_[r])
                {
                    for (const auto& [c, w] : b.data_[k])
                        out.add(r, c, v * w);
                }
            }
            return out;
        }

        SparseMatrix scaled(const Rational& s) const
        {
            SparseMatrix out(rows_, cols_);
            for (std::size_t r = 0; r < rows_; ++r)
            {
                for (const auto& [c, v] : data_[r])
                    out.add(r, c, v * s);
            }
            return out;
        }

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<std::map<std::size_t, Rational>> data_;
};

/**
 * Rank of a dense integer matrix by Bareiss fraction-free elimination.
 * The matrix is consumed.
 */
inline std::size_t bareiss_rank(std::vector<std::vector<Integer>> m)
{
    if (m.empty())
        return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    Integer prev = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col)
    {
        std::size_t pivot = rows;
        for (std::size_t r = rank; r < rows; ++r)
        {
            if (sgn(m[r][col]) != 0)
            {
                pivot = r;
                break;
            }
        }
        if (pivot == rows)
            continue;
        std::swap(m[pivot], m[rank]);
        const Integer& p = m[rank][col];
        for (std::size_t r = rank + 1; r < rows; ++r)
        {
            const Integer f = m[r][col];
            for (std::size_t c = col; c < cols; ++c)
            {
                Integer v = p * m[r][c] - f * m[rank][c];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m[r][c] = std::move(v);
            }
        }
        prev = m[rank][col];
        ++rank;
    }
    return rank;
}

namespace detail {

struct DisjointSets
{
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x)
        {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}   // namespace detail

inline std::size_t rank(const SparseMatrix& m)
{
    const std::size_t R = m.rows();
    const std::size_t C = m.cols();
    detail::DisjointSets sets(R + C);
    for (std::size_t r = 0; r < R; ++r)
    {
        for (const auto& [c, v] : m.row(r))
            sets.unite(r, R + c);
    }
    std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> blocks;
    for (std::size_t r = 0; r < R; ++r)
    {
        if (!m.row(r).empty())
            blocks[sets.find(r)].first.push_back(r);
    }
    for (std::size_t c = 0; c < C; ++c)
        blocks[sets.find(R + c)].second.push_back(c);

    std::size_t total = 0;
    for (auto& [root, block] : blocks)
    {
        const auto& [rows, cols] = block;
        if (rows.empty())
            continue;
        std::map<std::size_t, std::size_t> col_pos;
        for (std::size_t i = 0; i < cols.size(); ++i)
            col_pos[cols[i]] = i;
        std::vector<std::vector<Integer>> dense(rows.size(), std::vector<Integer>(cols.size(), 0));
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            Integer den = 1;
            for (const auto& [c, v] : m.row(rows[i]))
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
            for (const auto& [c, v] : m.row(rows[i]))
            {
                Rational scaled = v * Rational(den);
                dense[i][col_pos.at(c)] = scaled.get_num();
            }
        }
        total += bareiss_rank(std::move(dense));
    }
    return total;
}

/**
 * Reduced row echelon form of the span of `vectors` (dense, rational).
 * Returns the nonzero rows with pivot entry 1; `pivots` receives the pivot
 * column of each row.
 */
inline std::vector<std::vector<Rational>> reduced_row_echelon(std::vector<std::vector<Rational>> vectors,
                                                            std::vector<std::size_t>* pivots = nullptr)
{
    std::vector<std::vector<Rational>> out;
    std::vector<std::size_t> piv;
    if (vectors.empty())
    {
        if (pivots)
            pivots->clear();
        return out;
    }
    const std::size_t cols = vectors[0].size();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < vectors.size(); ++col)
    {
        std::size_t p = vectors.size();
        for (std::size_t r = row; r < vectors.size(); ++r)
        {
            if (sgn(vectors[r][col]) != 0)
            {
                p = r;
                break;
            }
        }
        if (p == vectors.size())
            continue;
        std::swap(vectors[p], vectors[row]);
        const Rational inv = 1 / vectors[row][col];
        for (std::size_t c = col; c < cols; ++c)
            vectors[row][c] *= inv;
        for (std::size_t r = 0; r < vectors.size(); ++r)
        {
            if (r == row || sgn(vectors[r][col]) == 0)
                continue;
            const Rational f = vectors[r][col];
            for (std::size_t c = col; c < cols; ++c)
                vectors[r][c] -= f * vectors[row][c];
        }
        piv.push_back(col);
        ++row;
    }
    vectors.resize(row);
    if (pivots)
        *pivots = std::move(piv);
    return vectors;
}

}   // namespace conex

#endif
