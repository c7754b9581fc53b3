#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <qlef/cohom.hpp>
#include <qlef/errors.hpp>
#include <qlef/linalg.hpp>
#include <qlef/mirror.hpp>
#include <qlef/series.hpp>
#include <qlef/twist.hpp>

namespace qlef
{

// Key of one descendant coefficient: the [hbar^{-2-psi_power}] coefficient of
// J(beta) along the monomial at position `monomial` of the grlex basis.
struct DescendantKey {
    CurveClass beta;
    int psi_power = 0;
    std::size_t monomial = 0;

    friend auto operator<=>(const DescendantKey &, const DescendantKey &) = default;
    friend bool operator==(const DescendantKey &, const DescendantKey &) = default;
};

using DescendantTable = std::map<DescendantKey, Rational>;

// Reads ev_*(c_top(E_beta) psi^a) off a normalized J-function. Only nonzero
// entries are stored; degree zero never contributes.
inline DescendantTable extract_descendants(const QSeries &jn)
{
    const auto &space = jn.space();
    const HbarLaurent zero_term = jn.coeff(CurveClass::zero(jn.nvars()));
    const CohClass base = zero_term.coeff(0);
    try {
        if (!(zero_term == HbarLaurent(base, 0))) {
            throw StructureViolation("mirror", "degree-zero term is not a pure hbar^0 class");
        }
        if (!normal_form(jn, base).is_normalized()) {
            throw NotNormalized("invariants", "series still has hbar^0 or hbar^-1 corrections");
        }
    } catch (const StructureViolation &e) {
        throw NotNormalized("invariants", std::string("series is not in J-function normal form: ") + e.what(),
                            e.degree());
    }
    DescendantTable table;
    const auto &basis = space.basis_grlex();
    for (const auto &[beta, term] : jn.terms()) {
        if (beta.is_zero()) {
            continue;
        }
        for (const auto &[k, cls] : term.terms()) {
            if (k > -2) {
                continue;
            }
            for (std::size_t pos = 0; pos < basis.size(); ++pos) {
                const Rational &c = cls[basis[pos]];
                if (sgn(c) != 0) {
                    table.emplace(DescendantKey{beta, -2 - k, pos}, c);
                }
            }
        }
    }
    return table;
}

// Everything the invariant pipeline produces for one geometry.
struct PipelineResult {
    TheoremReport report;
    CohClass base;
    QSeries i_series;
    MirrorMap map;
    QSeries j_series;
    std::vector<std::pair<CurveClass, Rational>> n_numbers;
};

// Degree-beta number from the hbar^-2 coefficient of a normalized J:
// int p_i . [hbar^-2] J(beta) = beta_i N_beta for any i with beta_i > 0.
inline Rational n_number_from_j(const QSeries &jn, const CurveClass &beta)
{
    const auto &space = jn.space();
    std::size_t i = 0;
    while (i < beta.size() && beta[i] == 0) {
        ++i;
    }
    if (i == beta.size()) {
        throw InvalidArgument("invariants", "N_beta is defined for nonzero classes only");
    }
    const CohClass c = jn.coeff(beta).coeff(-2);
    return integrate(space, c * CohClass::hyperplane(space, i)) / beta[i];
}

inline PipelineResult run_pipeline(const GeometrySpec &g, int max_degree)
{
    PipelineResult out;
    out.report = check_conditions(g);
    if (!out.report.theorem1_holds()) {
        throw Unsupported("invariants", "the Theorem 1 combination is negative in some factor; no mirror transformation applies");
    }
    out.base = base_class(g);
    out.i_series = i_function(g, max_degree);
    out.map = solve_mirror_map(out.i_series, out.base);
    out.j_series = apply_transform(out.i_series, out.map);
    for (const auto &beta : curve_classes_up_to(g.ambient.num_factors(), max_degree)) {
        if (!beta.is_zero()) {
            out.n_numbers.emplace_back(beta, n_number_from_j(out.j_series, beta));
        }
    }
    return out;
}

inline std::vector<std::pair<CurveClass, Rational>> n_numbers(const GeometrySpec &g, int max_degree)
{
    return run_pipeline(g, max_degree).n_numbers;
}

// Multiple-cover inversion of N_d = sum_{k | d} n_{d/k} k^{-3}. Input and
// output are indexed by d - 1.
inline std::vector<Rational> aspinwall_morrison(const std::vector<Rational> &big_n)
{
    std::vector<Rational> small(big_n.size());
    for (std::size_t d = 1; d <= big_n.size(); ++d) {
        Rational acc = big_n[d - 1];
        for (std::size_t k = 2; k <= d; ++k) {
            if (d % k == 0) {
                acc -= small[d / k - 1] / Rational(static_cast<long>(k * k * k));
            }
        }
        small[d - 1] = acc;
    }
    return small;
}

// Gated version: single projective space, Calabi-Yau combination, and an
// expected dimension of three.
inline std::vector<Rational> aspinwall_morrison(const GeometrySpec &g, const std::vector<Rational> &big_n)
{
    const auto rep = check_conditions(g);
    if (g.ambient.num_factors() != 1) {
        throw DimensionError("invariants", "multiple-cover inversion needs a single projective factor");
    }
    if (!rep.calabi_yau()) {
        throw DimensionError("invariants", "multiple-cover inversion needs a vanishing first Chern class combination");
    }
    const int dim = g.ambient.dim(0) - static_cast<int>(convex_part(g).rank())
                    + static_cast<int>(concave_part(g).rank());
    if (dim != 3) {
        throw DimensionError("invariants", "multiple-cover inversion needs a threefold, got dimension "
                                               + std::to_string(dim));
    }
    return aspinwall_morrison(big_n);
}

// The series built from a convex E for comparison with its dual: I' drops the
// k = 0 factor of each H^L, I'_dual uses the dual line bundles with k-range
// (<c1(L^dual),beta> + 1 .. 0) and the sign (-1)^rk(E).
struct SerrePair {
    QSeries i_prime;
    QSeries i_prime_dual;
    int sign = 1;
};

inline SerrePair serre_dual_pair(const GeometrySpec &g, int max_degree)
{
    validate(g);
    for (auto k : classify_bundle(g)) {
        if (k != Convexity::Convex) {
            throw Unsupported("invariants", "the duality pair is built from a convex bundle");
        }
    }
    const auto &space = g.ambient;
    QSeries j = g.external_j ? g.external_j->truncated(max_degree) : j_ambient(space, max_degree);
    SerrePair pair{QSeries(space, max_degree), QSeries(space, max_degree), g.bundle.rank() % 2 == 0 ? 1 : -1};
    for (const auto &[beta, jb] : j.terms()) {
        HbarLaurent direct = jb;
        HbarLaurent dual = jb * Rational(pair.sign);
        for (const auto &line : g.bundle.lines) {
            const int lb = pairing(line.l, beta);
            const CohClass c1 = CohClass::linear(space, line.l);
            direct *= hbar_product(c1, 1, lb);
            dual *= hbar_product(-c1, -lb + 1, 0);
        }
        pair.i_prime.set(beta, direct);
        pair.i_prime_dual.set(beta, dual);
    }
    return pair;
}

struct SerreOptions {
    // Admit the hbar^0 shift t0 -> t0 + g(q) alongside (f0, f1).
    bool allow_t0_shift = true;
};

struct SerreSolution {
    ScalarQSeries phi;
    MirrorMap map;
    ScalarQSeries t0_shift;
    // phi * transform(I') - I'_dual with everything solved; zero on success.
    QSeries residual;
    bool feasible = true;
    std::optional<CurveClass> first_obstructed;
    std::vector<std::string> dials_used;
    std::vector<std::string> notes;
};

// Joint order-by-order solve for phi(q), f1 and (optionally) a t0 shift with
// phi * transform(I') = I'_dual. phi and f0 enter every degree along the same
// direction, so f0 is held at zero. Obstructed degrees are recorded and the
// solve continues with the best pivot solution so the residual is reported
// through the full truncation.
inline SerreSolution solve_serre_factor(const SerrePair &pair, const SerreOptions &opts = {})
{
    const auto &space = pair.i_prime.space();
    const auto n = pair.i_prime.nvars();
    const int d = pair.i_prime.max_degree();
    if (!(pair.i_prime_dual.space() == space) || pair.i_prime_dual.max_degree() != d) {
        throw MismatchError("invariants", "Serre pair members do not share ambient space and truncation");
    }
    SerreSolution sol;
    sol.map = MirrorMap::identity(n, d);
    sol.phi = ScalarQSeries(n, d);
    sol.t0_shift = ScalarQSeries(n, d);

    const auto zero = CurveClass::zero(n);
    const HbarLaurent i0 = pair.i_prime.coeff(zero);
    const HbarLaurent v0 = pair.i_prime_dual.coeff(zero);

    // Collect the (hbar power, monomial) slots of a set of Laurent polynomials.
    auto slots_of = [&](const std::vector<const HbarLaurent *> &items) {
        std::vector<std::pair<int, std::size_t>> slots;
        for (const auto *h : items) {
            for (const auto &[k, c] : h->terms()) {
                for (std::size_t idx = 0; idx < space.size(); ++idx) {
                    if (sgn(c[idx]) != 0) {
                        slots.emplace_back(k, idx);
                    }
                }
            }
        }
        std::sort(slots.begin(), slots.end());
        slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
        return slots;
    };
    auto obstructed = [&](const CurveClass &beta) {
        if (sol.feasible) {
            sol.first_obstructed = beta;
        }
        sol.feasible = false;
    };

    // Degree zero fixes phi(0).
    {
        const auto slots = slots_of({&i0, &v0});
        std::vector<std::vector<Rational>> a;
        std::vector<Rational> rhs;
        for (const auto &[k, idx] : slots) {
            a.push_back({i0.coeff(k)[idx]});
            rhs.push_back(v0.coeff(k)[idx]);
        }
        if (a.empty()) {
            sol.phi.set(zero, Rational(1));
        } else {
            auto r = linalg::solve(std::move(a), std::move(rhs));
            if (!r.consistent) {
                obstructed(zero);
            }
            sol.phi.set(zero, r.x[0]);
        }
    }
    const Rational phi0 = sol.phi.constant_term();

    auto transformed = [&]() {
        return apply_transform(pair.i_prime, sol.map,
                               opts.allow_t0_shift ? std::optional<ScalarQSeries>(sol.t0_shift) : std::nullopt);
    };

    // Unknown directions at a fixed degree.
    std::vector<HbarLaurent> columns;
    columns.push_back(i0);
    for (std::size_t i = 0; i < n; ++i) {
        columns.push_back((i0 * CohClass::hyperplane(space, i)).shifted(-1) * phi0);
    }
    if (opts.allow_t0_shift) {
        columns.push_back(i0.shifted(-1) * phi0);
    }

    for (int k = 1; k <= d; ++k) {
        const QSeries residual = sol.phi * transformed() - pair.i_prime_dual;
        for (const auto &beta : curve_classes_up_to(n, k)) {
            if (beta.total() != k) {
                continue;
            }
            const HbarLaurent target = -residual.coeff(beta);
            std::vector<const HbarLaurent *> items{&target};
            for (const auto &c : columns) {
                items.push_back(&c);
            }
            const auto slots = slots_of(items);
            if (slots.empty()) {
                continue;
            }
            std::vector<std::vector<Rational>> a;
            std::vector<Rational> rhs;
            for (const auto &[e, idx] : slots) {
                std::vector<Rational> row;
                for (const auto &c : columns) {
                    row.push_back(c.coeff(e)[idx]);
                }
                a.push_back(std::move(row));
                rhs.push_back(target.coeff(e)[idx]);
            }
            auto r = linalg::solve(std::move(a), std::move(rhs));
            if (!r.consistent) {
                obstructed(beta);
            }
            sol.phi.set(beta, r.x[0]);
            for (std::size_t i = 0; i < n; ++i) {
                sol.map.f1[i].set(beta, r.x[1 + i]);
            }
            if (opts.allow_t0_shift) {
                sol.t0_shift.set(beta, r.x[1 + n]);
            }
        }
    }
    sol.residual = sol.phi * transformed() - pair.i_prime_dual;
    if (!sol.residual.is_zero()) {
        sol.feasible = false;
        if (!sol.first_obstructed) {
            for (const auto &[beta, c] : sol.residual.terms()) {
                if (!c.is_zero()) {
                    sol.first_obstructed = beta;
                    break;
                }
            }
        }
    }

    if (sol.phi.terms().size() > 1 || sol.phi.constant_term() != 1) {
        sol.dials_used.emplace_back("phi");
    }
    for (const auto &f : sol.map.f1) {
        if (!f.is_zero()) {
            sol.dials_used.emplace_back("f1");
            break;
        }
    }
    if (!sol.t0_shift.is_zero()) {
        sol.dials_used.emplace_back("t0_shift");
    }
    sol.notes.emplace_back("f0 held at zero: it is collinear with phi at every degree");
    return sol;
}

// Raises Infeasible at the first obstructed degree of an unsuccessful solve.
inline const SerreSolution &require_feasible(const SerreSolution &sol)
{
    if (!sol.feasible) {
        const auto beta = sol.first_obstructed.value_or(CurveClass::zero(sol.phi.nvars()));
        throw Infeasible("invariants", "no phi and mirror transformation match the dual series at degree " + beta.to_string(),
                         beta.degrees);
    }
    return sol;
}

} // namespace qlef
