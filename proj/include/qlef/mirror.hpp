#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <qlef/cohom.hpp>
#include <qlef/errors.hpp>
#include <qlef/linalg.hpp>
#include <qlef/series.hpp>

namespace qlef
{

// Change of variables t0 -> t0 + f0(q) hbar, t -> t + f1(q). Acts on a reduced
// series as e^{f0} e^{p.f1/hbar} S(q e^{f1}).
struct MirrorMap {
    ScalarQSeries f0;
    std::vector<ScalarQSeries> f1;

    static MirrorMap identity(std::size_t nvars, int max_degree)
    {
        return {ScalarQSeries(nvars, max_degree), std::vector<ScalarQSeries>(nvars, ScalarQSeries(nvars, max_degree))};
    }

    bool is_identity() const
    {
        if (!f0.is_zero()) {
            return false;
        }
        for (const auto &f : f1) {
            if (!f.is_zero()) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const MirrorMap &, const MirrorMap &) = default;
};

// [hbar^0] S = g(q) * base and [hbar^-1] S = base * sum_i divisor_part_i(q) p_i.
struct NormalForm {
    ScalarQSeries g;
    std::vector<ScalarQSeries> divisor_part;

    bool is_normalized() const
    {
        if (g.terms().size() != 1 || g.constant_term() != 1) {
            return false;
        }
        for (const auto &d : divisor_part) {
            if (!d.is_zero()) {
                return false;
            }
        }
        return true;
    }
};

namespace detail
{

struct DegreeNormalForm {
    Rational g;
    std::vector<Rational> divisor;
};

inline DegreeNormalForm normal_form_at(const HbarLaurent &term, const CohClass &base, const CurveClass &beta)
{
    const auto &space = base.space();
    if (!term.is_zero() && term.hi() > 0) {
        throw StructureViolation("mirror", "positive power hbar^" + std::to_string(term.hi()) + " at degree "
                                               + beta.to_string(),
                                 beta.degrees);
    }
    DegreeNormalForm out;
    out.divisor.assign(space.num_factors(), Rational(0));

    const CohClass c0 = term.coeff(0);
    std::size_t pivot = space.size();
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (sgn(base[i]) != 0) {
            pivot = i;
            break;
        }
    }
    out.g = c0[pivot] / base[pivot];
    if (const CohClass residual = c0 - base * out.g; !residual.is_zero()) {
        throw StructureViolation("mirror", "hbar^0 coefficient at degree " + beta.to_string()
                                               + " is not proportional to the base class; residual "
                                               + residual.to_string(),
                                 beta.degrees);
    }

    const CohClass c1 = term.coeff(-1);
    if (c1.is_zero()) {
        return out;
    }
    std::vector<std::vector<Rational>> a(space.size(), std::vector<Rational>(space.num_factors()));
    std::vector<Rational> rhs(space.size());
    for (std::size_t i = 0; i < space.num_factors(); ++i) {
        const CohClass col = base * CohClass::hyperplane(space, i);
        for (std::size_t r = 0; r < space.size(); ++r) {
            a[r][i] = col[r];
        }
    }
    for (std::size_t r = 0; r < space.size(); ++r) {
        rhs[r] = c1[r];
    }
    auto sol = linalg::solve(std::move(a), std::move(rhs));
    if (!sol.consistent) {
        CohClass fit = CohClass::zero(space);
        for (std::size_t i = 0; i < space.num_factors(); ++i) {
            fit += base * CohClass::hyperplane(space, i) * sol.x[i];
        }
        throw StructureViolation("mirror", "hbar^-1 coefficient at degree " + beta.to_string()
                                               + " is not a divisor multiple of the base class; residual "
                                               + (c1 - fit).to_string(),
                                 beta.degrees);
    }
    out.divisor = std::move(sol.x);
    return out;
}

inline void check_base(const QSeries &s, const CohClass &base)
{
    if (base.is_zero()) {
        throw StructureViolation("mirror", "base class vanishes; the normal form is undefined",
                                 CurveClass::zero(s.nvars()).degrees);
    }
    if (!(base.space() == s.space())) {
        throw MismatchError("mirror", "base class lives on a different ambient space");
    }
    const auto zero = CurveClass::zero(s.nvars());
    if (!(s.coeff(zero) == HbarLaurent(base, 0))) {
        throw StructureViolation("mirror", "degree-zero term " + s.coeff(zero).to_string()
                                               + " differs from the base class " + base.to_string(),
                                 zero.degrees);
    }
}

} // namespace detail

inline NormalForm normal_form(const QSeries &s, const CohClass &base)
{
    detail::check_base(s, base);
    const auto n = s.nvars();
    const int d = s.max_degree();
    NormalForm nf{ScalarQSeries::constant(n, d, Rational(1)), std::vector<ScalarQSeries>(n, ScalarQSeries(n, d))};
    for (const auto &[beta, term] : s.terms()) {
        if (beta.is_zero()) {
            continue;
        }
        const auto at = detail::normal_form_at(term, base, beta);
        nf.g.set(beta, at.g);
        for (std::size_t i = 0; i < n; ++i) {
            nf.divisor_part[i].set(beta, at.divisor[i]);
        }
    }
    return nf;
}

inline void check_map(const MirrorMap &m, const QSeries &s)
{
    if (m.f1.size() != s.nvars() || m.f0.nvars() != s.nvars() || m.f0.max_degree() != s.max_degree()) {
        throw MismatchError("mirror", "mirror map does not match the series' variables or truncation");
    }
    if (sgn(m.f0.constant_term()) != 0) {
        throw InvalidArgument("mirror", "f0 must have zero constant term");
    }
    for (const auto &f : m.f1) {
        if (f.max_degree() != s.max_degree() || sgn(f.constant_term()) != 0) {
            throw InvalidArgument("mirror", "f1 components must have zero constant term and matching truncation");
        }
    }
}

// e^{f0} e^{(p.f1 + t0_shift)/hbar} S(q e^{f1}). The optional t0_shift is the
// hbar^0 shift t0 -> t0 + g(q); the mirror maps solved here never use it.
inline QSeries apply_transform(const QSeries &s, const MirrorMap &m,
                               const std::optional<ScalarQSeries> &t0_shift = std::nullopt)
{
    check_map(m, s);
    const auto &space = s.space();
    const int d = s.max_degree();
    QSeries exponent(space, d);
    for (std::size_t i = 0; i < m.f1.size(); ++i) {
        const HbarLaurent p_over_hbar(CohClass::hyperplane(space, i), -1);
        for (const auto &[beta, c] : m.f1[i].terms()) {
            exponent.add(beta, p_over_hbar * c);
        }
    }
    if (t0_shift) {
        if (sgn(t0_shift->constant_term()) != 0) {
            throw InvalidArgument("mirror", "t0 shift must have zero constant term");
        }
        const HbarLaurent inv_hbar = HbarLaurent::hbar(space, -1);
        for (const auto &[beta, c] : t0_shift->terms()) {
            exponent.add(beta, inv_hbar * c);
        }
    }
    return qs_exp(m.f0) * (qs_exp(exponent) * qs_substitute(s, m.f1));
}

// Order-by-order solve for the map that brings S to the J-side normal form:
// g == 1 and divisor_part == 0. At degree beta the unknowns b_beta, a_beta
// enter linearly with unit pivots against the base class.
inline MirrorMap solve_mirror_map(const QSeries &s, const CohClass &base)
{
    normal_form(s, base);
    const auto n = s.nvars();
    const int d = s.max_degree();
    MirrorMap m = MirrorMap::identity(n, d);
    for (int k = 1; k <= d; ++k) {
        const QSeries t = apply_transform(s, m);
        for (const auto &[beta, term] : t.terms()) {
            if (beta.total() != k) {
                continue;
            }
            const auto at = detail::normal_form_at(term, base, beta);
            m.f0.set(beta, -at.g);
            for (std::size_t i = 0; i < n; ++i) {
                m.f1[i].set(beta, -at.divisor[i]);
            }
        }
    }
    return m;
}

// Ordered decompositions beta = beta_1 + ... + beta_s into nonzero effective
// classes, passed to `visit` as a vector of parts.
inline void for_each_ordered_decomposition(const CurveClass &beta,
                                           const std::function<void(const std::vector<CurveClass> &)> &visit)
{
    const auto n = beta.size();
    std::vector<CurveClass> parts;
    std::function<void(const CurveClass &)> rec = [&](const CurveClass &rest) {
        if (rest.is_zero()) {
            if (!parts.empty()) {
                visit(parts);
            }
            return;
        }
        for (const auto &gamma : curve_classes_up_to(n, rest.total())) {
            if (gamma.is_zero()) {
                continue;
            }
            bool fits = true;
            for (std::size_t i = 0; i < n; ++i) {
                fits = fits && gamma[i] <= rest[i];
            }
            if (!fits) {
                continue;
            }
            parts.push_back(gamma);
            rec(rest - gamma);
            parts.pop_back();
        }
    };
    rec(beta);
}

namespace detail
{

inline Rational x_dot(const std::vector<ScalarQSeries> &x, const CurveClass &beta, const CurveClass &b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (b[i] != 0) {
            s += x[i].coeff(beta) * b[i];
        }
    }
    return s;
}

inline void check_z_inputs(const std::vector<ScalarQSeries> &x, const ScalarQSeries &y)
{
    if (x.size() != y.nvars()) {
        throw MismatchError("mirror", "need one x-series per Kaehler variable");
    }
    for (const auto &xi : x) {
        if (xi.nvars() != y.nvars() || xi.max_degree() != y.max_degree()) {
            throw MismatchError("mirror", "x and y series must share variables and truncation");
        }
    }
}

} // namespace detail

// Q(q) = sum over ordered decompositions of (1/s!) prod_{m=1}^{s}
// (y_{beta_m} + x_{beta_m} . B_{m-1}), B_{m-1} = beta_1 + ... + beta_{m-1};
// returns z with Q = exp(sum z_beta q^beta), by brute-force expansion.
inline ScalarQSeries z_from_log(const std::vector<ScalarQSeries> &x, const ScalarQSeries &y)
{
    detail::check_z_inputs(x, y);
    const auto n = y.nvars();
    ScalarQSeries q = ScalarQSeries::constant(n, y.max_degree(), Rational(1));
    for (const auto &beta : curve_classes_up_to(n, y.max_degree())) {
        if (beta.is_zero()) {
            continue;
        }
        Rational total = 0;
        for_each_ordered_decomposition(beta, [&](const std::vector<CurveClass> &parts) {
            Rational term = 1 / factorial(static_cast<unsigned>(parts.size()));
            CurveClass b = CurveClass::zero(n);
            for (const auto &part : parts) {
                term *= y.coeff(part) + detail::x_dot(x, part, b);
                if (sgn(term) == 0) {
                    return;
                }
                b = b + part;
            }
            total += term;
        });
        q.set(beta, total);
    }
    return qs_log(q);
}

// Closed form: z_beta = sum (1/s!) y_{beta_1} prod_{m=2}^{s} x_{beta_m} . B_{m-1}.
inline ScalarQSeries z_closed_form(const std::vector<ScalarQSeries> &x, const ScalarQSeries &y)
{
    detail::check_z_inputs(x, y);
    const auto n = y.nvars();
    ScalarQSeries z(n, y.max_degree());
    for (const auto &beta : curve_classes_up_to(n, y.max_degree())) {
        if (beta.is_zero()) {
            continue;
        }
        Rational total = 0;
        for_each_ordered_decomposition(beta, [&](const std::vector<CurveClass> &parts) {
            Rational term = y.coeff(parts.front()) / factorial(static_cast<unsigned>(parts.size()));
            CurveClass b = parts.front();
            for (std::size_t m = 1; m < parts.size() && sgn(term) != 0; ++m) {
                term *= detail::x_dot(x, parts[m], b);
                b = b + parts[m];
            }
            total += term;
        });
        z.set(beta, total);
    }
    return z;
}

// Single-variable conveniences.
inline ScalarQSeries z_from_log(const ScalarQSeries &x, const ScalarQSeries &y)
{
    return z_from_log(std::vector<ScalarQSeries>{x}, y);
}
inline ScalarQSeries z_closed_form(const ScalarQSeries &x, const ScalarQSeries &y)
{
    return z_closed_form(std::vector<ScalarQSeries>{x}, y);
}

} // namespace qlef
