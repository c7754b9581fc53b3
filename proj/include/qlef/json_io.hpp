#pragma once

// JSON encoding of the library's values. Every rational is written as a
// "num/den" string; readers also accept bare integers in string form.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include <qlef/cohom.hpp>
#include <qlef/errors.hpp>
#include <qlef/invariants.hpp>
#include <qlef/mirror.hpp>
#include <qlef/oracle.hpp>
#include <qlef/rational.hpp>
#include <qlef/series.hpp>
#include <qlef/twist.hpp>

namespace qlef::json_io
{

using nlohmann::json;

inline Rational read_rational(const json &j)
{
    if (j.is_number_integer()) {
        return Rational(j.get<long>());
    }
    if (!j.is_string()) {
        throw InvalidArgument("json", "expected a \"num/den\" string, got " + j.dump());
    }
    try {
        return parse_fraction(j.get<std::string>());
    } catch (const std::invalid_argument &e) {
        throw InvalidArgument("json", e.what());
    }
}

inline json to_json(const CohClass &c)
{
    json out = json::array();
    const auto &space = c.space();
    for (auto idx : space.basis_grlex()) {
        if (sgn(c[idx]) != 0) {
            out.push_back({{"exp", space.exponent(idx)}, {"coeff", to_fraction_string(c[idx])}});
        }
    }
    return out;
}

inline CohClass coh_from_json(const AmbientSpace &space, const json &j)
{
    if (!j.is_array()) {
        throw InvalidArgument("json", "cohomology class must be a list of monomials");
    }
    CohClass c = CohClass::zero(space);
    for (const auto &m : j) {
        const auto exp = m.at("exp").get<std::vector<int>>();
        if (exp.size() != space.num_factors()) {
            throw MismatchError("json", "monomial exponent length does not match the ambient space");
        }
        c += CohClass::monomial(space, exp, read_rational(m.at("coeff")));
    }
    return c;
}

inline json to_json(const HbarLaurent &h)
{
    json out = json::array();
    for (auto it = h.terms().rbegin(); it != h.terms().rend(); ++it) {
        out.push_back({{"pow", it->first}, {"class", to_json(it->second)}});
    }
    return out;
}

inline json to_json(const QSeries &s)
{
    json terms = json::array();
    for (const auto &[beta, c] : s.terms()) {
        terms.push_back({{"beta", beta.degrees}, {"hbar", to_json(c)}});
    }
    return {{"D", s.max_degree()}, {"ambient", s.space().factors()}, {"terms", terms}};
}

// `space` is taken from the document when it carries "ambient".
inline QSeries qseries_from_json(const json &j, std::optional<AmbientSpace> space = std::nullopt)
{
    if (j.contains("ambient")) {
        AmbientSpace declared(j.at("ambient").get<std::vector<int>>());
        if (space && !(*space == declared)) {
            throw MismatchError("json", "series ambient space differs from the expected one");
        }
        space = declared;
    }
    if (!space) {
        throw InvalidArgument("json", "series without an ambient space");
    }
    QSeries s(*space, j.at("D").get<int>());
    for (const auto &t : j.at("terms")) {
        CurveClass beta{t.at("beta").get<std::vector<int>>()};
        if (beta.size() != space->num_factors() || !beta.is_effective()) {
            throw InvalidArgument("json", "bad curve class " + t.at("beta").dump());
        }
        HbarLaurent h(*space);
        for (const auto &p : t.at("hbar")) {
            h.add(p.at("pow").get<int>(), coh_from_json(*space, p.at("class")));
        }
        s.set(beta, h);
    }
    return s;
}

inline json to_json(const ScalarQSeries &s)
{
    json out = json::array();
    for (const auto &[beta, c] : s.terms()) {
        out.push_back({{"beta", beta.degrees}, {"coeff", to_fraction_string(c)}});
    }
    return out;
}

inline ScalarQSeries scalar_from_json(const json &j, std::size_t nvars, int max_degree)
{
    ScalarQSeries s(nvars, max_degree);
    for (const auto &t : j) {
        CurveClass beta{t.at("beta").get<std::vector<int>>()};
        if (beta.size() != nvars || !beta.is_effective()) {
            throw InvalidArgument("json", "bad curve class " + t.at("beta").dump());
        }
        s.set(beta, read_rational(t.at("coeff")));
    }
    return s;
}

inline json to_json(const MirrorMap &m)
{
    json f1 = json::array();
    for (const auto &f : m.f1) {
        f1.push_back(to_json(f));
    }
    return {{"f0", to_json(m.f0)}, {"f1", f1}};
}

inline MirrorMap mirror_map_from_json(const json &j, std::size_t nvars, int max_degree)
{
    MirrorMap m = MirrorMap::identity(nvars, max_degree);
    m.f0 = scalar_from_json(j.at("f0"), nvars, max_degree);
    const auto &f1 = j.at("f1");
    if (f1.size() != nvars) {
        throw MismatchError("json", "f1 needs one series per projective factor");
    }
    for (std::size_t i = 0; i < nvars; ++i) {
        m.f1[i] = scalar_from_json(f1[i], nvars, max_degree);
    }
    return m;
}

inline json to_json(const GeometrySpec &g)
{
    json bundle = json::array();
    for (const auto &line : g.bundle.lines) {
        bundle.push_back({{"l", line.l}});
    }
    return {{"ambient", g.ambient.factors()},
            {"bundle", bundle},
            {"external_j", g.external_j ? to_json(*g.external_j) : json(nullptr)}};
}

inline GeometrySpec geometry_from_json(const json &j)
{
    GeometrySpec g{AmbientSpace(j.at("ambient").get<std::vector<int>>()), BundleSpec{}, std::nullopt};
    for (const auto &line : j.at("bundle")) {
        g.bundle.lines.push_back(LineBundle{line.at("l").get<std::vector<int>>()});
    }
    if (j.contains("external_j") && !j.at("external_j").is_null()) {
        g.external_j = qseries_from_json(j.at("external_j"), g.ambient);
    }
    validate(g);
    return g;
}

inline json to_json(const TheoremReport &r, const GeometrySpec &g)
{
    json kinds = json::array();
    for (auto k : classify_bundle(g)) {
        kinds.push_back(to_string(k));
    }
    std::vector<bool> nonneg(r.theorem1_nonneg.begin(), r.theorem1_nonneg.end());
    return {{"classification", kinds},
            {"theorem1_combination", r.theorem1_combination},
            {"theorem1_nonneg", nonneg},
            {"theorem1_holds", r.theorem1_holds()},
            {"fano_combination", r.fano_combination},
            {"theorem2_case", to_string(r.theorem2_case)},
            {"calabi_yau", r.calabi_yau()}};
}

inline json to_json(const SerreSolution &s)
{
    json out{{"phi", to_json(s.phi)},
             {"map", to_json(s.map)},
             {"t0_shift", to_json(s.t0_shift)},
             {"residual_zero", s.residual.is_zero()},
             {"feasible", s.feasible},
             {"dials_used", s.dials_used},
             {"notes", s.notes}};
    out["first_obstructed"] = s.first_obstructed ? json(s.first_obstructed->degrees) : json(nullptr);
    if (!s.residual.is_zero()) {
        out["residual"] = to_json(s.residual);
    }
    return out;
}

inline json to_json(const oracle::OracleRun &run, const json &geometry, int d)
{
    return {{"geometry", geometry},
            {"d", d},
            {"value", to_fraction_string(run.value)},
            {"weights_used", run.weights.to_strings()},
            {"graphs_evaluated", run.graphs_evaluated}};
}

struct InvariantRow {
    CurveClass beta;
    Rational big_n;
    std::optional<Rational> small_n;
};

inline json to_json(const std::vector<InvariantRow> &rows)
{
    json out = json::array();
    for (const auto &r : rows) {
        out.push_back({{"degree", r.beta.degrees},
                       {"N_d", to_fraction_string(r.big_n)},
                       {"n_d", r.small_n ? json(to_fraction_string(*r.small_n)) : json(nullptr)}});
    }
    return out;
}

inline std::string to_tsv(const std::vector<InvariantRow> &rows)
{
    std::string out = "degree\tN_d\tn_d\n";
    for (const auto &r : rows) {
        out += r.beta.to_string() + "\t" + to_fraction_string(r.big_n) + "\t"
               + (r.small_n ? to_fraction_string(*r.small_n) : std::string("-")) + "\n";
    }
    return out;
}

inline json error_json(const Error &e)
{
    return {{"error", e.kind()},
            {"module", e.module()},
            {"beta", e.degree() ? json(*e.degree()) : json(nullptr)},
            {"message", e.what()}};
}

} // namespace qlef::json_io
