#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <qlef/rational.hpp>

namespace qlef::linalg
{

// Outcome of an exact solve of A x = b.
struct SolveResult {
    // A solution of the pivot rows (free variables set to zero). When the
    // system is inconsistent this still satisfies every equation that does
    // not depend on the inconsistent combination.
    std::vector<Rational> x;
    bool consistent = true;
    std::size_t rank = 0;
    // Columns that ended up without a pivot.
    std::vector<std::size_t> free_columns;
};

// Gauss-Jordan elimination over Q. Rows of `a` are equations; pivots are taken
// in column order, first nonzero row wins, so results are deterministic.
inline SolveResult solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a.front().size();

    SolveResult out;
    out.x.assign(cols, Rational(0));

    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    std::size_t c = 0;
    for (; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && is_zero(a[p][c])) {
            ++p;
        }
        if (p == rows) {
            out.free_columns.push_back(c);
            continue;
        }
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        const Rational inv = 1 / a[r][c];
        for (std::size_t k = c; k < cols; ++k) {
            a[r][k] *= inv;
        }
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || is_zero(a[i][c])) {
                continue;
            }
            const Rational f = a[i][c];
            for (std::size_t k = c; k < cols; ++k) {
                a[i][k] -= f * a[r][k];
            }
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (; c < cols; ++c) {
        out.free_columns.push_back(c);
    }
    out.rank = r;
    for (std::size_t i = r; i < rows; ++i) {
        if (!is_zero(b[i])) {
            out.consistent = false;
        }
    }
    for (std::size_t i = 0; i < r; ++i) {
        out.x[pivot_col[i]] = b[i];
    }
    return out;
}

} // namespace qlef::linalg
