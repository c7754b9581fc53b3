#pragma once

// Torus fixed-point evaluation of one-point genus-zero twisted invariants of
// P^r in degrees one and two. Deliberately independent of the series code:
// only rationals, the bundle description and explicit graph sums.
//
// Conventions: alpha_i is the restriction of c_1(O(1)) to the fixed point
// p_i, so T_{p_i}P^r has weights alpha_i - alpha_j (j != i). A degree-d cover
// of the line through p_i and p_j has domain tangent weight
// (alpha_i - alpha_j)/d at the point over p_i.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <qlef/cohom.hpp>
#include <qlef/errors.hpp>
#include <qlef/rational.hpp>

namespace qlef::oracle
{

struct TorusWeights {
    std::vector<Rational> w;

    // Pairwise distinct integers in 1..97.
    static TorusWeights draw(int r, std::mt19937_64 &rng)
    {
        std::uniform_int_distribution<int> dist(1, 97);
        std::set<int> used;
        TorusWeights tw;
        while (static_cast<int>(tw.w.size()) < r + 1) {
            const int x = dist(rng);
            if (used.insert(x).second) {
                tw.w.emplace_back(x);
            }
        }
        return tw;
    }

    std::vector<std::string> to_strings() const
    {
        std::vector<std::string> out;
        for (const auto &x : w) {
            out.push_back(to_fraction_string(x));
        }
        return out;
    }
};

struct GraphEdge {
    int u = 0;
    int v = 0;
    int degree = 1;
};

// Decorated tree indexing a fixed locus of M_{0,1}(P^r, d).
struct FixedGraph {
    std::vector<int> labels;
    std::vector<GraphEdge> edges;
    int marked = 0;
    // |Aut|: graph symmetries times the deck groups of the edge covers.
    int automorphisms = 1;

    int valence(int v) const
    {
        int n = 0;
        for (const auto &e : edges) {
            n += (e.u == v) + (e.v == v);
        }
        return n;
    }
    int total_degree() const
    {
        int d = 0;
        for (const auto &e : edges) {
            d += e.degree;
        }
        return d;
    }
};

namespace detail
{

struct Shape {
    int vertices = 0;
    std::vector<GraphEdge> edges;
    // Vertex permutations preserving the (unlabeled, degree-decorated) shape.
    std::vector<std::vector<int>> symmetries;
};

inline std::vector<Shape> shapes(int d)
{
    if (d == 1) {
        return {Shape{2, {{0, 1, 1}}, {{0, 1}, {1, 0}}}};
    }
    return {Shape{2, {{0, 1, 2}}, {{0, 1}, {1, 0}}},
            Shape{3, {{0, 1, 1}, {1, 2, 1}}, {{0, 1, 2}, {2, 1, 0}}}};
}

} // namespace detail

// One representative per isomorphism class, with its automorphism order.
inline std::vector<FixedGraph> enumerate_graphs(int r, int d)
{
    if (d < 1 || d > 2) {
        throw DegreeOutOfScope("oracle", "localization graphs are only enumerated for degrees 1 and 2, got "
                                             + std::to_string(d));
    }
    if (r < 1) {
        throw InvalidArgument("oracle", "projective dimension must be >= 1");
    }
    std::vector<FixedGraph> out;
    for (const auto &shape : detail::shapes(d)) {
        using Key = std::pair<std::vector<int>, int>;
        std::set<Key> seen;
        std::vector<int> labels(static_cast<std::size_t>(shape.vertices), 0);
        auto adjacent_ok = [&]() {
            for (const auto &e : shape.edges) {
                if (labels[static_cast<std::size_t>(e.u)] == labels[static_cast<std::size_t>(e.v)]) {
                    return false;
                }
            }
            return true;
        };
        auto rec = [&](auto &&self, std::size_t pos) -> void {
            if (pos == labels.size()) {
                if (!adjacent_ok()) {
                    return;
                }
                for (int m = 0; m < shape.vertices; ++m) {
                    Key best{labels, m};
                    int fixed = 0;
                    for (const auto &perm : shape.symmetries) {
                        std::vector<int> img(labels.size());
                        for (std::size_t v = 0; v < labels.size(); ++v) {
                            img[static_cast<std::size_t>(perm[v])] = labels[v];
                        }
                        Key k{img, perm[static_cast<std::size_t>(m)]};
                        if (k == Key{labels, m}) {
                            ++fixed;
                        }
                        best = std::min(best, k);
                    }
                    if (!seen.insert(best).second) {
                        continue;
                    }
                    FixedGraph g;
                    g.labels = best.first;
                    g.marked = best.second;
                    g.edges = shape.edges;
                    g.automorphisms = fixed;
                    for (const auto &e : shape.edges) {
                        g.automorphisms *= e.degree;
                    }
                    out.push_back(std::move(g));
                }
                return;
            }
            for (int i = 0; i <= r; ++i) {
                labels[pos] = i;
                self(self, pos + 1);
            }
        };
        rec(rec, 0);
    }
    return out;
}

namespace detail
{

inline Rational checked_inverse(const Rational &x)
{
    if (sgn(x) == 0) {
        throw WeightCollision("oracle", "torus weights hit a vanishing denominator");
    }
    return 1 / x;
}

inline Rational power(const Rational &x, int k)
{
    Rational out = 1;
    if (k >= 0) {
        for (int i = 0; i < k; ++i) {
            out *= x;
        }
        return out;
    }
    const Rational inv = checked_inverse(x);
    for (int i = 0; i < -k; ++i) {
        out *= inv;
    }
    return out;
}

// The weight of O(l) restricted to the point at parameter t/(|l| d) along the
// edge from v (t = 0) to u (t = |l| d).
inline Rational interpolate(int l, const Rational &au, const Rational &av, int d, int t)
{
    const int steps = (l > 0 ? l : -l) * d;
    return l * av + Rational(t, steps) * (l * au - l * av);
}

// Equivariant Euler class of H^0 (l > 0) or H^1 (l < 0) of the pulled-back
// line bundle on the whole tree.
inline Rational bundle_weight(const FixedGraph &g, const std::vector<Rational> &a, int l)
{
    Rational out = 1;
    for (const auto &e : g.edges) {
        const auto &au = a[static_cast<std::size_t>(g.labels[static_cast<std::size_t>(e.u)])];
        const auto &av = a[static_cast<std::size_t>(g.labels[static_cast<std::size_t>(e.v)])];
        const int steps = (l > 0 ? l : -l) * e.degree;
        // Convex: every point including both ends; concave: interior points only.
        const int from = l > 0 ? 0 : 1;
        const int to = l > 0 ? steps : steps - 1;
        for (int t = from; t <= to; ++t) {
            out *= interpolate(l, au, av, e.degree, t);
        }
    }
    // Node corrections from the normalization sequence.
    for (std::size_t v = 0; v < g.labels.size(); ++v) {
        const int val = g.valence(static_cast<int>(v));
        const Rational fiber = l * a[static_cast<std::size_t>(g.labels[v])];
        out *= power(fiber, l > 0 ? 1 - val : val - 1);
    }
    return out;
}

// Flag weight: tangent weight of the edge domain at its point over `v`.
inline Rational flag_weight(const FixedGraph &g, const std::vector<Rational> &a, const GraphEdge &e, int v)
{
    const int other = e.u == v ? e.v : e.u;
    return (a[static_cast<std::size_t>(g.labels[static_cast<std::size_t>(v)])]
            - a[static_cast<std::size_t>(g.labels[static_cast<std::size_t>(other)])])
           / e.degree;
}

// int_{M_{0,m}} psi_mark^a prod_F 1/(w_F - psi_F), m = flags + 1 >= 3.
inline Rational contracted_vertex(const std::vector<Rational> &w, int a)
{
    const int m = static_cast<int>(w.size()) + 1;
    const int dim = m - 3;
    if (a > dim) {
        return 0;
    }
    // Distribute dim - a psi powers over the flags; multinomial coefficients.
    Rational total = 0;
    const int rest = dim - a;
    std::vector<int> k(w.size(), 0);
    auto rec = [&](auto &&self, std::size_t pos, int left) -> void {
        if (pos + 1 == w.size()) {
            k[pos] = left;
            Rational term = factorial(static_cast<unsigned>(dim)) / factorial(static_cast<unsigned>(a));
            for (std::size_t f = 0; f < w.size(); ++f) {
                term /= factorial(static_cast<unsigned>(k[f]));
                term *= power(w[f], -1 - k[f]);
            }
            total += term;
            return;
        }
        for (int x = 0; x <= left; ++x) {
            k[pos] = x;
            self(self, pos + 1, left - x);
        }
    };
    rec(rec, 0, rest);
    return total;
}

// Contribution of one fixed locus to int psi^a ev^*(h^b) e(E).
inline Rational graph_contribution(const FixedGraph &g, int r, const std::vector<int> &lines, int psi_power,
                                   int h_power, const std::vector<Rational> &a)
{
    Rational out = Rational(1, g.automorphisms);

    for (const auto &e : g.edges) {
        const auto i = static_cast<std::size_t>(g.labels[static_cast<std::size_t>(e.u)]);
        const auto j = static_cast<std::size_t>(g.labels[static_cast<std::size_t>(e.v)]);
        const int d = e.degree;
        // Moving part of H^0(f^*T P^r) along the edge, including the
        // +-(alpha_i - alpha_j)/d directions that the vertex terms rebalance.
        Rational edge = power(a[i] - a[j], -2 * d);
        edge *= (d % 2 == 0 ? 1 : -1);
        edge *= power(Rational(d), 2 * d) / (factorial(static_cast<unsigned>(d)) * factorial(static_cast<unsigned>(d)));
        for (int k = 0; k <= r; ++k) {
            if (static_cast<std::size_t>(k) == i || static_cast<std::size_t>(k) == j) {
                continue;
            }
            for (int s = 0; s <= d; ++s) {
                edge *= checked_inverse((s * a[i] + (d - s) * a[j]) / d - a[static_cast<std::size_t>(k)]);
            }
        }
        out *= edge;
    }

    for (std::size_t v = 0; v < g.labels.size(); ++v) {
        const auto i = static_cast<std::size_t>(g.labels[v]);
        const bool marked = static_cast<int>(v) == g.marked;
        std::vector<Rational> flags;
        for (const auto &e : g.edges) {
            if (e.u == static_cast<int>(v) || e.v == static_cast<int>(v)) {
                flags.push_back(flag_weight(g, a, e, static_cast<int>(v)));
            }
        }
        const int val = static_cast<int>(flags.size());
        Rational tangent = 1;
        for (int j = 0; j <= r; ++j) {
            if (static_cast<std::size_t>(j) != i) {
                tangent *= a[i] - a[static_cast<std::size_t>(j)];
            }
        }
        out *= power(tangent, val - 1);
        if (!marked && val == 1) {
            out *= flags[0];
        } else if (marked && val == 1) {
            // The marking sits on the edge: psi restricts to minus the flag weight.
            out *= power(-flags[0], psi_power);
        } else if (!marked && val == 2) {
            out *= checked_inverse(flags[0] + flags[1]);
        } else {
            out *= contracted_vertex(flags, marked ? psi_power : 0);
        }
        if (marked) {
            out *= power(a[i], h_power);
        }
    }

    for (int l : lines) {
        out *= bundle_weight(g, a, l);
    }
    return out;
}

inline std::vector<int> line_degrees(const BundleSpec &bundle)
{
    std::vector<int> out;
    for (const auto &line : bundle.lines) {
        if (line.l.size() != 1) {
            throw MismatchError("oracle", "the oracle handles bundles on a single projective space");
        }
        if (line.l[0] == 0) {
            throw InvalidArgument("oracle", "trivial line bundle in the bundle description");
        }
        out.push_back(line.l[0]);
    }
    return out;
}

} // namespace detail

// int_{M_{0,1}(P^r,d)} psi^a ev^*(h^b) c_top(E_d), E_d = pi_* f^* E for the
// positive summands and R^1 pi_* f^* E for the negative ones.
inline Rational localized_invariant(int r, int d, const BundleSpec &bundle, int psi_power, int h_power,
                                    const TorusWeights &weights)
{
    if (static_cast<int>(weights.w.size()) != r + 1) {
        throw MismatchError("oracle", "need r + 1 torus weights");
    }
    for (std::size_t i = 0; i < weights.w.size(); ++i) {
        for (std::size_t j = i + 1; j < weights.w.size(); ++j) {
            if (weights.w[i] == weights.w[j]) {
                throw WeightCollision("oracle", "torus weights must be pairwise distinct");
            }
        }
    }
    const auto lines = detail::line_degrees(bundle);
    Rational total = 0;
    for (const auto &g : enumerate_graphs(r, d)) {
        total += detail::graph_contribution(g, r, lines, psi_power, h_power, weights.w);
    }
    return total;
}

struct OracleRun {
    Rational value;
    TorusWeights weights;
    std::size_t graphs_evaluated = 0;
    int attempts = 0;
};

// Draws weights from `seed` until no denominator vanishes.
inline OracleRun localized_invariant_seeded(int r, int d, const BundleSpec &bundle, int psi_power, int h_power,
                                            std::uint64_t seed, int max_attempts = 64)
{
    std::mt19937_64 rng(seed);
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        auto w = TorusWeights::draw(r, rng);
        try {
            OracleRun run;
            run.value = localized_invariant(r, d, bundle, psi_power, h_power, w);
            run.weights = std::move(w);
            run.graphs_evaluated = enumerate_graphs(r, d).size();
            run.attempts = attempt;
            return run;
        } catch (const WeightCollision &) {
            continue;
        }
    }
    throw WeightCollision("oracle", "no admissible torus weights after " + std::to_string(max_attempts) + " draws");
}

// N_d = int_{M_{0,0}} c_top(E'_d), via the divisor axiom from one marking:
// int_{M_{0,1}} ev^*(h) c_top(E_d) = d N_d.
inline OracleRun oracle_n_number(int r, int d, const BundleSpec &bundle, std::uint64_t seed)
{
    auto run = localized_invariant_seeded(r, d, bundle, 0, 1, seed);
    run.value /= d;
    return run;
}

} // namespace qlef::oracle
