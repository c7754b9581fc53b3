#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <qlef/cohom.hpp>
#include <qlef/errors.hpp>
#include <qlef/series.hpp>

namespace qlef
{

enum class Convexity { Convex, Concave };

inline const char *to_string(Convexity c)
{
    return c == Convexity::Convex ? "convex" : "concave";
}

// Sign-pattern proxy for convexity of O(l) on a product of projective spaces.
// Mixed signs, and negative degrees next to zeros, are refused.
inline Convexity classify(const std::vector<int> &l)
{
    bool all_nonneg = true;
    bool all_neg = true;
    bool any_pos = false;
    for (int x : l) {
        all_nonneg = all_nonneg && x >= 0;
        all_neg = all_neg && x <= -1;
        any_pos = any_pos || x > 0;
    }
    if (l.empty()) {
        throw Unclassifiable("twist", "empty multidegree");
    }
    if (all_nonneg && any_pos) {
        return Convexity::Convex;
    }
    if (all_neg) {
        return Convexity::Concave;
    }
    std::string s;
    for (std::size_t i = 0; i < l.size(); ++i) {
        s += (i ? "," : "") + std::to_string(l[i]);
    }
    throw Unclassifiable("twist", "multidegree (" + s + ") is neither convex nor concave");
}

struct GeometrySpec {
    AmbientSpace ambient;
    BundleSpec bundle;
    // Replaces the closed-form ambient J-function when present.
    std::optional<QSeries> external_j;
};

inline std::vector<Convexity> classify_bundle(const GeometrySpec &g)
{
    std::vector<Convexity> out;
    out.reserve(g.bundle.rank());
    for (const auto &line : g.bundle.lines) {
        out.push_back(classify(line.l));
    }
    return out;
}

inline void validate(const GeometrySpec &g)
{
    validate_bundle(g.ambient, g.bundle);
    const auto kinds = classify_bundle(g);
    if (g.ambient.num_factors() > 1) {
        for (auto k : kinds) {
            if (k == Convexity::Concave) {
                throw Unsupported("twist", "concave line bundles are only supported on a single projective space");
            }
        }
    }
    if (g.external_j) {
        const auto &j = *g.external_j;
        if (!(j.space() == g.ambient)) {
            throw MismatchError("twist", "external J-function lives on a different ambient space");
        }
        if (!(j.coeff(CurveClass::zero(g.ambient.num_factors())) == HbarLaurent::one(g.ambient))) {
            throw InvalidArgument("twist", "external J-function must have degree-zero term 1");
        }
    }
}

inline BundleSpec convex_part(const GeometrySpec &g)
{
    BundleSpec b;
    for (const auto &line : g.bundle.lines) {
        if (classify(line.l) == Convexity::Convex) {
            b.lines.push_back(line);
        }
    }
    return b;
}

inline BundleSpec concave_part(const GeometrySpec &g)
{
    BundleSpec b;
    for (const auto &line : g.bundle.lines) {
        if (classify(line.l) == Convexity::Concave) {
            b.lines.push_back(line);
        }
    }
    return b;
}

// Degree-zero term of the I-function: Euler class of the convex summands.
// Concave summands contribute the empty product.
inline CohClass base_class(const GeometrySpec &g)
{
    return euler_class(g.ambient, convex_part(g));
}

enum class Theorem2Case { ConcaveRank2plus, FanoIndex2plus, MixedSum, None };

inline const char *to_string(Theorem2Case c)
{
    switch (c) {
        case Theorem2Case::ConcaveRank2plus:
            return "ConcaveRank2plus";
        case Theorem2Case::FanoIndex2plus:
            return "FanoIndex2plus";
        case Theorem2Case::MixedSum:
            return "MixedSum";
        case Theorem2Case::None:
            break;
    }
    return "None";
}

struct TheoremReport {
    // (r_i + 1) - sum_convex l_i + sum_concave l_i, per factor.
    std::vector<int> theorem1_combination;
    std::vector<bool> theorem1_nonneg;
    // (r_i + 1) - sum_convex l_i, per factor.
    std::vector<int> fano_combination;
    Theorem2Case theorem2_case = Theorem2Case::None;

    bool theorem1_holds() const
    {
        for (bool b : theorem1_nonneg) {
            if (!b) {
                return false;
            }
        }
        return true;
    }
    // Theorem 1 combination vanishes in every factor.
    bool calabi_yau() const
    {
        for (int c : theorem1_combination) {
            if (c != 0) {
                return false;
            }
        }
        return true;
    }
};

inline TheoremReport check_conditions(const GeometrySpec &g)
{
    validate(g);
    const auto n = g.ambient.num_factors();
    TheoremReport rep;
    rep.theorem1_combination.assign(n, 0);
    rep.fano_combination.assign(n, 0);
    std::size_t rank_convex = 0;
    std::size_t rank_concave = 0;
    for (std::size_t i = 0; i < n; ++i) {
        rep.theorem1_combination[i] = g.ambient.dim(i) + 1;
        rep.fano_combination[i] = g.ambient.dim(i) + 1;
    }
    for (const auto &line : g.bundle.lines) {
        const bool convex = classify(line.l) == Convexity::Convex;
        (convex ? rank_convex : rank_concave)++;
        for (std::size_t i = 0; i < n; ++i) {
            if (convex) {
                rep.theorem1_combination[i] -= line.l[i];
                rep.fano_combination[i] -= line.l[i];
            } else {
                rep.theorem1_combination[i] += line.l[i];
            }
        }
    }
    for (int c : rep.theorem1_combination) {
        rep.theorem1_nonneg.push_back(c >= 0);
    }
    if (!rep.theorem1_holds()) {
        return rep;
    }
    bool fano2 = true;
    for (int c : rep.fano_combination) {
        fano2 = fano2 && c >= 2;
    }
    if (rank_concave == 0) {
        if (fano2) {
            rep.theorem2_case = Theorem2Case::FanoIndex2plus;
        }
    } else if (rank_concave >= 2) {
        if (rank_convex == 0) {
            rep.theorem2_case = Theorem2Case::ConcaveRank2plus;
        } else if (fano2) {
            rep.theorem2_case = Theorem2Case::MixedSum;
        }
    }
    return rep;
}

// prod_{k=from}^{to} (c + k hbar); empty product is 1.
inline HbarLaurent hbar_product(const CohClass &c, int from, int to)
{
    const auto &space = c.space();
    HbarLaurent out = HbarLaurent::one(space);
    for (int k = from; k <= to; ++k) {
        HbarLaurent factor(c, 0);
        factor.add(1, CohClass::scalar(space, Rational(k)));
        out *= factor;
    }
    return out;
}

inline int pairing(const std::vector<int> &l, const CurveClass &beta)
{
    int s = 0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        s += l[i] * beta[i];
    }
    return s;
}

// Hypergeometric modification H^L_beta of a single line bundle.
inline HbarLaurent h_factor(const AmbientSpace &space, const std::vector<int> &l, const CurveClass &beta)
{
    if (l.size() != space.num_factors() || beta.size() != space.num_factors()) {
        throw MismatchError("twist", "multidegree or curve class does not match the ambient space");
    }
    const CohClass c1 = CohClass::linear(space, l);
    const int lb = pairing(l, beta);
    if (classify(l) == Convexity::Convex) {
        return hbar_product(c1, 0, lb);
    }
    return hbar_product(c1, lb + 1, -1);
}

// J-function of the ambient product:
// J(beta) = prod_i prod_{k=1}^{d_i} (p_i + k hbar)^{-(r_i+1)}.
inline QSeries j_ambient(const AmbientSpace &space, int max_degree)
{
    if (max_degree < 0) {
        throw InvalidArgument("twist", "negative truncation degree");
    }
    QSeries out(space, max_degree);
    for (const auto &beta : curve_classes_up_to(space.num_factors(), max_degree)) {
        if (beta.is_zero()) {
            out.set(beta, HbarLaurent::one(space));
            continue;
        }
        HbarLaurent denom = HbarLaurent::one(space);
        int weight = 0;
        for (std::size_t i = 0; i < space.num_factors(); ++i) {
            const auto p = CohClass::hyperplane(space, i);
            for (int k = 1; k <= beta[i]; ++k) {
                HbarLaurent f(p, 0);
                f.add(1, CohClass::scalar(space, Rational(k)));
                for (int e = 0; e <= space.dim(i); ++e) {
                    denom *= f;
                }
            }
            weight += (space.dim(i) + 1) * beta[i];
        }
        // Homogeneous of degree -weight, so the expansion stops at -weight - dim.
        out.set(beta, hl_invert(denom, -weight - space.dimension(), -weight));
    }
    return out;
}

// I^E(beta) = J(beta) * prod_j H^{L_j}_beta.
inline QSeries i_function(const GeometrySpec &g, int max_degree)
{
    validate(g);
    QSeries j;
    if (g.external_j) {
        if (g.external_j->max_degree() < max_degree) {
            throw MismatchError("twist", "external J-function is truncated at degree "
                                             + std::to_string(g.external_j->max_degree()) + " < "
                                             + std::to_string(max_degree));
        }
        j = g.external_j->truncated(max_degree);
    } else {
        j = j_ambient(g.ambient, max_degree);
    }
    QSeries out(g.ambient, max_degree);
    for (const auto &[beta, jb] : j.terms()) {
        HbarLaurent term = jb;
        for (const auto &line : g.bundle.lines) {
            term *= h_factor(g.ambient, line.l, beta);
        }
        out.set(beta, term);
    }
    return out;
}

} // namespace qlef
