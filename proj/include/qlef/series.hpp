#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <qlef/cohom.hpp>
#include <qlef/errors.hpp>
#include <qlef/rational.hpp>

namespace qlef
{

inline constexpr int default_truncation = 6;

// Lowest hbar exponent any automatically sized window may reach on `space`
// at q-truncation D.
inline int hbar_floor(const AmbientSpace &space, int max_degree)
{
    const int rmax = *std::max_element(space.factors().begin(), space.factors().end());
    return -((rmax + 1) * max_degree + space.dimension() + 3);
}

// Finite Laurent polynomial in hbar with cohomology-class coefficients.
// Zero coefficients are never stored.
class HbarLaurent
{
public:
    HbarLaurent() = default;
    explicit HbarLaurent(AmbientSpace space) : m_space(std::move(space)) {}
    HbarLaurent(const CohClass &c, int power) : m_space(c.space())
    {
        if (!c.is_zero()) {
            m_terms.emplace(power, c);
        }
    }

    static HbarLaurent one(const AmbientSpace &space)
    {
        return HbarLaurent(CohClass::unit(space), 0);
    }
    // The monomial hbar^k.
    static HbarLaurent hbar(const AmbientSpace &space, int k = 1)
    {
        return HbarLaurent(CohClass::unit(space), k);
    }

    const AmbientSpace &space() const noexcept
    {
        return m_space;
    }
    const std::map<int, CohClass> &terms() const noexcept
    {
        return m_terms;
    }
    bool is_zero() const noexcept
    {
        return m_terms.empty();
    }
    // Smallest / largest stored exponent; meaningless for the zero element.
    int lo() const
    {
        return m_terms.empty() ? 0 : m_terms.begin()->first;
    }
    int hi() const
    {
        return m_terms.empty() ? 0 : m_terms.rbegin()->first;
    }

    CohClass coeff(int k) const
    {
        auto it = m_terms.find(k);
        return it == m_terms.end() ? CohClass::zero(m_space) : it->second;
    }
    void set(int k, const CohClass &c)
    {
        if (c.is_zero()) {
            m_terms.erase(k);
        } else {
            m_terms.insert_or_assign(k, c);
        }
    }
    void add(int k, const CohClass &c)
    {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = m_terms.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                m_terms.erase(it);
            }
        }
    }

    // Terms with exponent in [lo, hi].
    HbarLaurent window(int lo, int hi) const
    {
        HbarLaurent out(m_space);
        for (auto it = m_terms.lower_bound(lo); it != m_terms.end() && it->first <= hi; ++it) {
            out.m_terms.insert(*it);
        }
        return out;
    }

    HbarLaurent &operator+=(const HbarLaurent &o)
    {
        check_same(o);
        for (const auto &[k, c] : o.m_terms) {
            add(k, c);
        }
        return *this;
    }
    HbarLaurent &operator-=(const HbarLaurent &o)
    {
        check_same(o);
        for (const auto &[k, c] : o.m_terms) {
            add(k, -c);
        }
        return *this;
    }
    friend HbarLaurent operator+(HbarLaurent a, const HbarLaurent &b)
    {
        return a += b;
    }
    friend HbarLaurent operator-(HbarLaurent a, const HbarLaurent &b)
    {
        return a -= b;
    }
    friend HbarLaurent operator-(HbarLaurent a)
    {
        for (auto &[k, c] : a.m_terms) {
            c = -c;
        }
        return a;
    }
    friend HbarLaurent operator*(HbarLaurent a, const Rational &s)
    {
        if (sgn(s) == 0) {
            return HbarLaurent(a.m_space);
        }
        for (auto &[k, c] : a.m_terms) {
            c *= s;
        }
        return a;
    }
    friend HbarLaurent operator*(const Rational &s, HbarLaurent a)
    {
        return std::move(a) * s;
    }
    friend HbarLaurent operator*(const HbarLaurent &a, const CohClass &c)
    {
        HbarLaurent out(a.m_space);
        for (const auto &[k, x] : a.m_terms) {
            out.add(k, x * c);
        }
        return out;
    }
    friend HbarLaurent operator*(const HbarLaurent &a, const HbarLaurent &b)
    {
        a.check_same(b);
        HbarLaurent out(a.m_space);
        for (const auto &[ka, ca] : a.m_terms) {
            for (const auto &[kb, cb] : b.m_terms) {
                out.add(ka + kb, ca * cb);
            }
        }
        return out;
    }
    HbarLaurent &operator*=(const HbarLaurent &o)
    {
        return *this = *this * o;
    }

    // Multiply by hbar^k.
    HbarLaurent shifted(int k) const
    {
        HbarLaurent out(m_space);
        for (const auto &[e, c] : m_terms) {
            out.m_terms.emplace(e + k, c);
        }
        return out;
    }

    friend bool operator==(const HbarLaurent &a, const HbarLaurent &b)
    {
        return a.m_space == b.m_space && a.m_terms == b.m_terms;
    }

    std::string to_string() const
    {
        if (m_terms.empty()) {
            return "0";
        }
        std::string s;
        for (auto it = m_terms.rbegin(); it != m_terms.rend(); ++it) {
            if (!s.empty()) {
                s += " + ";
            }
            s += "(" + it->second.to_string() + ")*hbar^" + std::to_string(it->first);
        }
        return s;
    }

private:
    void check_same(const HbarLaurent &o) const
    {
        if (!(m_space == o.m_space)) {
            throw MismatchError("series", "hbar series live on different ambient spaces");
        }
    }

    AmbientSpace m_space;
    std::map<int, CohClass> m_terms;
};

inline HbarLaurent hl_mul(const HbarLaurent &a, const HbarLaurent &b)
{
    return a * b;
}

// Expansion of 1/a in descending powers of hbar, keeping exponents in
// [lo, hi]. The coefficient of the highest power of hbar in `a` must be
// invertible in the cohomology ring.
inline HbarLaurent hl_invert(const HbarLaurent &a, int lo, int hi)
{
    if (a.is_zero()) {
        throw NonInvertible("series", "cannot invert the zero series");
    }
    const auto &space = a.space();
    const int top = a.hi();
    const CohClass lead = a.coeff(top);
    if (sgn(lead.scalar_part()) == 0) {
        throw NonInvertible("series", "leading hbar coefficient " + lead.to_string() + " is nilpotent");
    }
    const CohClass lead_inv = lead.inverse();

    // a = hbar^top * A(u), u = 1/hbar, A_j = coeff(top - j); 1/a = hbar^-top * B(u).
    const int span = top - a.lo();
    const int n_max = -top - lo;
    HbarLaurent out(space);
    if (n_max < 0) {
        return out;
    }
    std::vector<CohClass> b;
    b.reserve(static_cast<std::size_t>(n_max) + 1);
    b.push_back(lead_inv);
    for (int n = 1; n <= n_max; ++n) {
        CohClass acc = CohClass::zero(space);
        for (int j = 1; j <= std::min(n, span); ++j) {
            const CohClass aj = a.coeff(top - j);
            if (!aj.is_zero()) {
                acc += aj * b[static_cast<std::size_t>(n - j)];
            }
        }
        b.push_back(-(lead_inv * acc));
    }
    for (int n = 0; n <= n_max; ++n) {
        const int e = -top - n;
        if (e >= lo && e <= hi) {
            out.set(e, b[static_cast<std::size_t>(n)]);
        }
    }
    return out;
}

// Power series in the Kaehler variables q_1..q_N, truncated at total degree D,
// with scalar coefficients.
class ScalarQSeries
{
public:
    ScalarQSeries() = default;
    ScalarQSeries(std::size_t nvars, int max_degree) : m_nvars(nvars), m_max_degree(max_degree)
    {
        if (max_degree < 0) {
            throw InvalidArgument("series", "negative truncation degree");
        }
    }

    static ScalarQSeries constant(std::size_t nvars, int max_degree, const Rational &c)
    {
        ScalarQSeries s(nvars, max_degree);
        s.set(CurveClass::zero(nvars), c);
        return s;
    }

    std::size_t nvars() const noexcept
    {
        return m_nvars;
    }
    int max_degree() const noexcept
    {
        return m_max_degree;
    }
    const std::map<CurveClass, Rational> &terms() const noexcept
    {
        return m_terms;
    }
    bool is_zero() const noexcept
    {
        return m_terms.empty();
    }

    Rational coeff(const CurveClass &beta) const
    {
        auto it = m_terms.find(beta);
        return it == m_terms.end() ? Rational(0) : it->second;
    }
    Rational constant_term() const
    {
        return coeff(CurveClass::zero(m_nvars));
    }
    void set(const CurveClass &beta, const Rational &c)
    {
        check_key(beta);
        if (beta.total() > m_max_degree) {
            return;
        }
        if (sgn(c) == 0) {
            m_terms.erase(beta);
        } else {
            m_terms.insert_or_assign(beta, c);
        }
    }
    void add(const CurveClass &beta, const Rational &c)
    {
        if (sgn(c) == 0 || beta.total() > m_max_degree) {
            return;
        }
        check_key(beta);
        auto [it, inserted] = m_terms.try_emplace(beta, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) {
                m_terms.erase(it);
            }
        }
    }

    ScalarQSeries truncated(int d) const
    {
        ScalarQSeries out(m_nvars, std::min(d, m_max_degree));
        for (const auto &[b, c] : m_terms) {
            out.add(b, c);
        }
        return out;
    }

    ScalarQSeries &operator+=(const ScalarQSeries &o)
    {
        check_same(o);
        for (const auto &[b, c] : o.m_terms) {
            add(b, c);
        }
        return *this;
    }
    ScalarQSeries &operator-=(const ScalarQSeries &o)
    {
        check_same(o);
        for (const auto &[b, c] : o.m_terms) {
            add(b, -c);
        }
        return *this;
    }
    friend ScalarQSeries operator+(ScalarQSeries a, const ScalarQSeries &b)
    {
        return a += b;
    }
    friend ScalarQSeries operator-(ScalarQSeries a, const ScalarQSeries &b)
    {
        return a -= b;
    }
    friend ScalarQSeries operator-(ScalarQSeries a)
    {
        for (auto &[b, c] : a.m_terms) {
            c = -c;
        }
        return a;
    }
    friend ScalarQSeries operator*(ScalarQSeries a, const Rational &s)
    {
        if (sgn(s) == 0) {
            return ScalarQSeries(a.m_nvars, a.m_max_degree);
        }
        for (auto &[b, c] : a.m_terms) {
            c *= s;
        }
        return a;
    }
    friend ScalarQSeries operator*(const Rational &s, ScalarQSeries a)
    {
        return std::move(a) * s;
    }
    friend ScalarQSeries operator*(const ScalarQSeries &a, const ScalarQSeries &b)
    {
        a.check_same(b);
        ScalarQSeries out(a.m_nvars, a.m_max_degree);
        for (const auto &[ba, ca] : a.m_terms) {
            for (const auto &[bb, cb] : b.m_terms) {
                if (ba.total() + bb.total() <= a.m_max_degree) {
                    out.add(ba + bb, ca * cb);
                }
            }
        }
        return out;
    }

    friend bool operator==(const ScalarQSeries &, const ScalarQSeries &) = default;

    std::string to_string() const
    {
        if (m_terms.empty()) {
            return "0";
        }
        std::string s;
        for (const auto &[b, c] : m_terms) {
            s += (s.empty() ? "" : " + ") + c.get_str() + "*q^" + b.to_string();
        }
        return s;
    }

private:
    void check_key(const CurveClass &beta) const
    {
        if (beta.size() != m_nvars || !beta.is_effective()) {
            throw MismatchError("series", "curve class " + beta.to_string() + " does not fit a series in "
                                              + std::to_string(m_nvars) + " variables");
        }
    }
    void check_same(const ScalarQSeries &o) const
    {
        if (m_nvars != o.m_nvars) {
            throw MismatchError("series", "scalar series have different numbers of variables");
        }
        if (m_max_degree != o.m_max_degree) {
            throw MismatchError("series", "scalar series have different truncation degrees ("
                                              + std::to_string(m_max_degree) + " vs "
                                              + std::to_string(o.m_max_degree) + ")");
        }
    }

    std::size_t m_nvars = 0;
    int m_max_degree = 0;
    std::map<CurveClass, Rational> m_terms;
};

// exp(a) = sum_{k<=D} a^k/k!, for a without constant term.
inline ScalarQSeries qs_exp(const ScalarQSeries &a)
{
    if (sgn(a.constant_term()) != 0) {
        throw InvalidArgument("series", "exp needs a series with zero constant term");
    }
    ScalarQSeries out = ScalarQSeries::constant(a.nvars(), a.max_degree(), Rational(1));
    ScalarQSeries power = out;
    for (int k = 1; k <= a.max_degree(); ++k) {
        power = power * a * Rational(1, k);
        if (power.is_zero()) {
            break;
        }
        out += power;
    }
    return out;
}

// log(a) for a with constant term 1.
inline ScalarQSeries qs_log(const ScalarQSeries &a)
{
    if (a.constant_term() != 1) {
        throw InvalidArgument("series", "log needs a series with constant term 1");
    }
    ScalarQSeries u = a;
    u.set(CurveClass::zero(a.nvars()), Rational(0));
    ScalarQSeries out(a.nvars(), a.max_degree());
    ScalarQSeries power = ScalarQSeries::constant(a.nvars(), a.max_degree(), Rational(1));
    for (int k = 1; k <= a.max_degree(); ++k) {
        power = power * u;
        if (power.is_zero()) {
            break;
        }
        out += power * Rational(k % 2 == 1 ? 1 : -1, k);
    }
    return out;
}

// Truncated generating series sum_beta q^beta S(beta) with hbar-Laurent
// coefficients. The beta = 0 term is always present.
class QSeries
{
public:
    QSeries() = default;
    QSeries(AmbientSpace space, int max_degree) : m_space(std::move(space)), m_max_degree(max_degree)
    {
        if (max_degree < 0) {
            throw InvalidArgument("series", "negative truncation degree");
        }
        m_terms.emplace(CurveClass::zero(m_space.num_factors()), HbarLaurent(m_space));
    }

    // The constant series `c` (no q-dependence).
    static QSeries constant(const AmbientSpace &space, int max_degree, const HbarLaurent &c)
    {
        QSeries s(space, max_degree);
        s.set(CurveClass::zero(space.num_factors()), c);
        return s;
    }

    const AmbientSpace &space() const noexcept
    {
        return m_space;
    }
    std::size_t nvars() const noexcept
    {
        return m_space.num_factors();
    }
    int max_degree() const noexcept
    {
        return m_max_degree;
    }
    const std::map<CurveClass, HbarLaurent> &terms() const noexcept
    {
        return m_terms;
    }

    HbarLaurent coeff(const CurveClass &beta) const
    {
        auto it = m_terms.find(beta);
        return it == m_terms.end() ? HbarLaurent(m_space) : it->second;
    }
    void set(const CurveClass &beta, const HbarLaurent &c)
    {
        check_key(beta);
        if (!(c.space() == m_space)) {
            throw MismatchError("series", "coefficient lives on a different ambient space");
        }
        if (beta.total() > m_max_degree) {
            return;
        }
        if (c.is_zero() && !beta.is_zero()) {
            m_terms.erase(beta);
        } else {
            m_terms.insert_or_assign(beta, c);
        }
    }
    void add(const CurveClass &beta, const HbarLaurent &c)
    {
        if (c.is_zero() || beta.total() > m_max_degree) {
            return;
        }
        check_key(beta);
        auto [it, inserted] = m_terms.try_emplace(beta, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero() && !beta.is_zero()) {
                m_terms.erase(it);
            }
        }
    }

    QSeries truncated(int d) const
    {
        QSeries out(m_space, std::min(d, m_max_degree));
        for (const auto &[b, c] : m_terms) {
            out.add(b, c);
        }
        return out;
    }

    QSeries &operator+=(const QSeries &o)
    {
        check_same(o);
        for (const auto &[b, c] : o.m_terms) {
            add(b, c);
        }
        return *this;
    }
    QSeries &operator-=(const QSeries &o)
    {
        check_same(o);
        for (const auto &[b, c] : o.m_terms) {
            add(b, -c);
        }
        return *this;
    }
    friend QSeries operator+(QSeries a, const QSeries &b)
    {
        return a += b;
    }
    friend QSeries operator-(QSeries a, const QSeries &b)
    {
        return a -= b;
    }
    friend QSeries operator*(const QSeries &a, const QSeries &b)
    {
        a.check_same(b);
        QSeries out(a.m_space, a.m_max_degree);
        for (const auto &[ba, ca] : a.m_terms) {
            if (ca.is_zero()) {
                continue;
            }
            for (const auto &[bb, cb] : b.m_terms) {
                if (cb.is_zero() || ba.total() + bb.total() > a.m_max_degree) {
                    continue;
                }
                out.add(ba + bb, ca * cb);
            }
        }
        return out;
    }
    // Termwise scaling by a scalar q-series.
    friend QSeries operator*(const ScalarQSeries &f, const QSeries &s)
    {
        if (f.nvars() != s.nvars() || f.max_degree() != s.max_degree()) {
            throw MismatchError("series", "scalar series and class series do not share variables/truncation");
        }
        QSeries out(s.m_space, s.m_max_degree);
        for (const auto &[bf, cf] : f.terms()) {
            for (const auto &[bs, cs] : s.m_terms) {
                if (bf.total() + bs.total() <= s.m_max_degree && !cs.is_zero()) {
                    out.add(bf + bs, cs * cf);
                }
            }
        }
        return out;
    }
    friend QSeries operator*(QSeries s, const CohClass &c)
    {
        for (auto &[b, x] : s.m_terms) {
            x = x * c;
        }
        s.prune();
        return s;
    }

    friend bool operator==(const QSeries &a, const QSeries &b)
    {
        return a.m_space == b.m_space && a.m_max_degree == b.m_max_degree && a.m_terms == b.m_terms;
    }

    bool is_zero() const
    {
        return std::all_of(m_terms.begin(), m_terms.end(), [](const auto &kv) { return kv.second.is_zero(); });
    }

private:
    void prune()
    {
        for (auto it = m_terms.begin(); it != m_terms.end();) {
            if (it->second.is_zero() && !it->first.is_zero()) {
                it = m_terms.erase(it);
            } else {
                ++it;
            }
        }
    }
    void check_key(const CurveClass &beta) const
    {
        if (beta.size() != m_space.num_factors() || !beta.is_effective()) {
            throw MismatchError("series", "curve class " + beta.to_string() + " does not fit the ambient space");
        }
    }
    void check_same(const QSeries &o) const
    {
        if (!(m_space == o.m_space)) {
            throw MismatchError("series", "q-series live on different ambient spaces");
        }
        if (m_max_degree != o.m_max_degree) {
            throw MismatchError("series", "q-series have different truncation degrees ("
                                              + std::to_string(m_max_degree) + " vs "
                                              + std::to_string(o.m_max_degree) + ")");
        }
    }

    AmbientSpace m_space;
    int m_max_degree = 0;
    std::map<CurveClass, HbarLaurent> m_terms;
};

inline QSeries qs_mul(const QSeries &a, const QSeries &b)
{
    return a * b;
}

// exp of a class-valued series without beta = 0 term, or whose beta = 0 term
// is nilpotent (so the sum terminates even without q-truncation).
inline QSeries qs_exp(const QSeries &a)
{
    const auto &space = a.space();
    QSeries out = QSeries::constant(space, a.max_degree(), HbarLaurent::one(space));
    QSeries power = out;
    // Each factor raises q-degree or cohomological degree, so D + dim steps suffice.
    const int steps = a.max_degree() + space.dimension();
    for (int k = 1; k <= steps; ++k) {
        power = power * a;
        if (power.is_zero()) {
            break;
        }
        const Rational inv_fact = 1 / factorial(static_cast<unsigned>(k));
        for (const auto &[b, c] : power.terms()) {
            out.add(b, c * inv_fact);
        }
    }
    return out;
}

// S(q) -> S(q e^{f1(q)}): each q^beta term picks up exp(sum_i beta_i f1_i).
inline QSeries qs_substitute(const QSeries &s, const std::vector<ScalarQSeries> &f1)
{
    if (f1.size() != s.nvars()) {
        throw MismatchError("series", "substitution needs one series per Kaehler variable");
    }
    for (const auto &f : f1) {
        if (f.nvars() != s.nvars() || f.max_degree() != s.max_degree()) {
            throw MismatchError("series", "substitution series do not match the target truncation");
        }
        if (sgn(f.constant_term()) != 0) {
            throw InvalidArgument("series", "substitution series must have zero constant term");
        }
    }
    QSeries out(s.space(), s.max_degree());
    for (const auto &[beta0, c] : s.terms()) {
        if (c.is_zero()) {
            continue;
        }
        if (beta0.is_zero()) {
            out.add(beta0, c);
            continue;
        }
        ScalarQSeries exponent(s.nvars(), s.max_degree() - beta0.total());
        for (std::size_t i = 0; i < f1.size(); ++i) {
            if (beta0[i] != 0) {
                exponent += f1[i].truncated(exponent.max_degree()) * Rational(beta0[i]);
            }
        }
        const ScalarQSeries factor = qs_exp(exponent);
        for (const auto &[gamma, e] : factor.terms()) {
            out.add(beta0 + gamma, c * e);
        }
    }
    return out;
}

// Scalar version of the substitution q -> q e^{f1(q)}.
inline ScalarQSeries qs_substitute(const ScalarQSeries &s, const std::vector<ScalarQSeries> &f1)
{
    if (f1.size() != s.nvars()) {
        throw MismatchError("series", "substitution needs one series per Kaehler variable");
    }
    ScalarQSeries out(s.nvars(), s.max_degree());
    for (const auto &[beta0, c] : s.terms()) {
        ScalarQSeries exponent(s.nvars(), s.max_degree() - beta0.total());
        for (std::size_t i = 0; i < f1.size(); ++i) {
            if (sgn(f1[i].constant_term()) != 0) {
                throw InvalidArgument("series", "substitution series must have zero constant term");
            }
            if (beta0[i] != 0) {
                exponent += f1[i].truncated(exponent.max_degree()) * Rational(beta0[i]);
            }
        }
        const ScalarQSeries factor = qs_exp(exponent);
        for (const auto &[gamma, e] : factor.terms()) {
            out.add(beta0 + gamma, c * e);
        }
    }
    return out;
}

// Series g such that substituting f1 and then g is the identity through the
// truncation degree. Solved order by order from g(q) = -f1(q e^{g(q)}).
inline std::vector<ScalarQSeries> inverse_substitution(const std::vector<ScalarQSeries> &f1)
{
    if (f1.empty()) {
        return {};
    }
    const std::size_t n = f1.size();
    const int d = f1.front().max_degree();
    std::vector<ScalarQSeries> g(n, ScalarQSeries(n, d));
    for (int k = 1; k <= d; ++k) {
        // Terms of total degree k of -f1(q e^{g}) only involve g below degree k.
        std::vector<ScalarQSeries> next;
        next.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            next.push_back(-qs_substitute(f1[i], g));
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto &[b, c] : next[i].terms()) {
                if (b.total() == k) {
                    g[i].set(b, c);
                }
            }
        }
    }
    return g;
}

} // namespace qlef
