#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <qlef/errors.hpp>
#include <qlef/rational.hpp>

namespace qlef
{

// The ambient product of projective spaces P^{r_1} x ... x P^{r_N}.
class AmbientSpace
{
public:
    AmbientSpace() = default;

    explicit AmbientSpace(std::vector<int> factors) : m_factors(std::move(factors))
    {
        if (m_factors.empty()) {
            throw InvalidArgument("cohom", "ambient space needs at least one projective factor");
        }
        for (int r : m_factors) {
            if (r < 1) {
                throw InvalidArgument("cohom", "projective factor dimension must be >= 1, got "
                                                   + std::to_string(r));
            }
        }
        m_strides.resize(m_factors.size());
        std::size_t s = 1;
        for (std::size_t i = m_factors.size(); i-- > 0;) {
            m_strides[i] = s;
            s *= static_cast<std::size_t>(m_factors[i] + 1);
        }
        m_size = s;
        build_basis();
    }

    const std::vector<int> &factors() const noexcept
    {
        return m_factors;
    }
    std::size_t num_factors() const noexcept
    {
        return m_factors.size();
    }
    int dim(std::size_t i) const
    {
        return m_factors.at(i);
    }
    // Complex dimension of the product.
    int dimension() const
    {
        return std::accumulate(m_factors.begin(), m_factors.end(), 0);
    }
    // Number of monomials prod p_i^{a_i}, 0 <= a_i <= r_i.
    std::size_t size() const noexcept
    {
        return m_size;
    }

    std::size_t index(const std::vector<int> &exp) const
    {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < m_factors.size(); ++i) {
            idx += static_cast<std::size_t>(exp[i]) * m_strides[i];
        }
        return idx;
    }
    bool valid_exponent(const std::vector<int> &exp) const
    {
        if (exp.size() != m_factors.size()) {
            return false;
        }
        for (std::size_t i = 0; i < exp.size(); ++i) {
            if (exp[i] < 0 || exp[i] > m_factors[i]) {
                return false;
            }
        }
        return true;
    }
    std::vector<int> exponent(std::size_t idx) const
    {
        std::vector<int> e(m_factors.size());
        for (std::size_t i = 0; i < m_factors.size(); ++i) {
            e[i] = static_cast<int>(idx / m_strides[i]);
            idx %= m_strides[i];
        }
        return e;
    }
    int degree_of(std::size_t idx) const
    {
        const auto e = exponent(idx);
        return std::accumulate(e.begin(), e.end(), 0);
    }
    std::size_t top_index() const
    {
        return m_size - 1;
    }

    // Dense indices of the monomial basis in graded lexicographic order.
    const std::vector<std::size_t> &basis_grlex() const noexcept
    {
        return m_grlex;
    }

    // Index of the product of two monomials, or size() if it vanishes.
    std::size_t product_index(std::size_t i, std::size_t j) const
    {
        std::size_t out = 0;
        for (std::size_t k = 0; k < m_factors.size(); ++k) {
            const auto a = (i / m_strides[k]) % static_cast<std::size_t>(m_factors[k] + 1);
            const auto b = (j / m_strides[k]) % static_cast<std::size_t>(m_factors[k] + 1);
            if (a + b > static_cast<std::size_t>(m_factors[k])) {
                return m_size;
            }
            out += (a + b) * m_strides[k];
        }
        return out;
    }

    friend bool operator==(const AmbientSpace &a, const AmbientSpace &b)
    {
        return a.m_factors == b.m_factors;
    }

private:
    void build_basis()
    {
        m_grlex.resize(m_size);
        std::iota(m_grlex.begin(), m_grlex.end(), std::size_t{0});
        std::vector<std::pair<int, std::vector<int>>> keys(m_size);
        for (std::size_t i = 0; i < m_size; ++i) {
            keys[i] = {degree_of(i), exponent(i)};
        }
        // Degree first; within a degree, lexicographically larger exponents first.
        std::stable_sort(m_grlex.begin(), m_grlex.end(), [&](std::size_t a, std::size_t b) {
            if (keys[a].first != keys[b].first) {
                return keys[a].first < keys[b].first;
            }
            return keys[a].second > keys[b].second;
        });
    }

    std::vector<int> m_factors;
    std::vector<std::size_t> m_strides;
    std::size_t m_size = 0;
    std::vector<std::size_t> m_grlex;
};

// Effective curve class, recorded by its multidegree.
struct CurveClass {
    std::vector<int> degrees;

    CurveClass() = default;
    explicit CurveClass(std::vector<int> d) : degrees(std::move(d)) {}

    static CurveClass zero(std::size_t n)
    {
        return CurveClass(std::vector<int>(n, 0));
    }

    std::size_t size() const noexcept
    {
        return degrees.size();
    }
    int operator[](std::size_t i) const
    {
        return degrees[i];
    }
    int total() const
    {
        return std::accumulate(degrees.begin(), degrees.end(), 0);
    }
    bool is_zero() const
    {
        return std::all_of(degrees.begin(), degrees.end(), [](int d) { return d == 0; });
    }
    bool is_effective() const
    {
        return std::all_of(degrees.begin(), degrees.end(), [](int d) { return d >= 0; });
    }

    friend CurveClass operator+(const CurveClass &a, const CurveClass &b)
    {
        CurveClass c(a.degrees);
        for (std::size_t i = 0; i < c.degrees.size(); ++i) {
            c.degrees[i] += b.degrees[i];
        }
        return c;
    }
    friend CurveClass operator-(const CurveClass &a, const CurveClass &b)
    {
        CurveClass c(a.degrees);
        for (std::size_t i = 0; i < c.degrees.size(); ++i) {
            c.degrees[i] -= b.degrees[i];
        }
        return c;
    }
    friend bool operator==(const CurveClass &, const CurveClass &) = default;

    // Total degree first, then lexicographic. Series iterate in this order.
    friend std::strong_ordering operator<=>(const CurveClass &a, const CurveClass &b)
    {
        if (auto c = a.total() <=> b.total(); c != 0) {
            return c;
        }
        return a.degrees <=> b.degrees;
    }

    std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < degrees.size(); ++i) {
            s += (i ? "," : "") + std::to_string(degrees[i]);
        }
        return s + ")";
    }
};

// All effective classes with 0 <= |beta| <= max_total, in CurveClass order.
inline std::vector<CurveClass> curve_classes_up_to(std::size_t n, int max_total)
{
    std::vector<CurveClass> out;
    std::vector<int> cur(n, 0);
    for (int total = 0; total <= max_total; ++total) {
        // compositions of `total` into n non-negative parts, lexicographic
        std::vector<CurveClass> layer;
        auto rec = [&](auto &&self, std::size_t pos, int left) -> void {
            if (pos + 1 == n) {
                cur[pos] = left;
                layer.emplace_back(cur);
                return;
            }
            for (int d = 0; d <= left; ++d) {
                cur[pos] = d;
                self(self, pos + 1, left - d);
            }
        };
        rec(rec, 0, total);
        std::sort(layer.begin(), layer.end());
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

// Element of Q[p_1..p_N]/(p_i^{r_i+1}), stored densely.
class CohClass
{
public:
    CohClass() = default;
    explicit CohClass(AmbientSpace space) : m_space(std::move(space)), m_coeffs(m_space.size()) {}

    static CohClass zero(const AmbientSpace &space)
    {
        return CohClass(space);
    }
    static CohClass scalar(const AmbientSpace &space, const Rational &c)
    {
        CohClass x(space);
        x.m_coeffs[0] = c;
        return x;
    }
    static CohClass unit(const AmbientSpace &space)
    {
        return scalar(space, Rational(1));
    }
    // The hyperplane class p_i pulled back from the i-th factor.
    static CohClass hyperplane(const AmbientSpace &space, std::size_t i)
    {
        std::vector<int> e(space.num_factors(), 0);
        e.at(i) = 1;
        return monomial(space, e);
    }
    static CohClass monomial(const AmbientSpace &space, const std::vector<int> &exp,
                             const Rational &c = Rational(1))
    {
        CohClass x(space);
        if (exp.size() != space.num_factors()) {
            throw MismatchError("cohom", "exponent length does not match the ambient space");
        }
        for (int a : exp) {
            if (a < 0) {
                throw InvalidArgument("cohom", "negative exponent");
            }
        }
        if (space.valid_exponent(exp)) {
            x.m_coeffs[space.index(exp)] = c;
        }
        return x;
    }
    // sum_i l_i p_i
    static CohClass linear(const AmbientSpace &space, const std::vector<int> &l)
    {
        if (l.size() != space.num_factors()) {
            throw MismatchError("cohom", "multidegree length does not match the ambient space");
        }
        CohClass x(space);
        for (std::size_t i = 0; i < l.size(); ++i) {
            x += hyperplane(space, i) * Rational(l[i]);
        }
        return x;
    }

    const AmbientSpace &space() const noexcept
    {
        return m_space;
    }
    const Rational &operator[](std::size_t idx) const
    {
        return m_coeffs[idx];
    }
    Rational &operator[](std::size_t idx)
    {
        return m_coeffs[idx];
    }
    const Rational &coeff(const std::vector<int> &exp) const
    {
        return m_coeffs[m_space.index(exp)];
    }
    std::size_t size() const noexcept
    {
        return m_coeffs.size();
    }
    const Rational &scalar_part() const
    {
        return m_coeffs[0];
    }

    bool is_zero() const
    {
        return std::all_of(m_coeffs.begin(), m_coeffs.end(), [](const Rational &c) { return sgn(c) == 0; });
    }
    bool is_scalar() const
    {
        for (std::size_t i = 1; i < m_coeffs.size(); ++i) {
            if (sgn(m_coeffs[i]) != 0) {
                return false;
            }
        }
        return true;
    }

    CohClass &operator+=(const CohClass &o)
    {
        check_same(o);
        for (std::size_t i = 0; i < m_coeffs.size(); ++i) {
            m_coeffs[i] += o.m_coeffs[i];
        }
        return *this;
    }
    CohClass &operator-=(const CohClass &o)
    {
        check_same(o);
        for (std::size_t i = 0; i < m_coeffs.size(); ++i) {
            m_coeffs[i] -= o.m_coeffs[i];
        }
        return *this;
    }
    CohClass &operator*=(const Rational &c)
    {
        for (auto &x : m_coeffs) {
            x *= c;
        }
        return *this;
    }
    friend CohClass operator+(CohClass a, const CohClass &b)
    {
        return a += b;
    }
    friend CohClass operator-(CohClass a, const CohClass &b)
    {
        return a -= b;
    }
    friend CohClass operator-(CohClass a)
    {
        for (auto &x : a.m_coeffs) {
            x = -x;
        }
        return a;
    }
    friend CohClass operator*(CohClass a, const Rational &c)
    {
        return a *= c;
    }
    friend CohClass operator*(const Rational &c, CohClass a)
    {
        return a *= c;
    }
    friend CohClass operator*(const CohClass &a, const CohClass &b)
    {
        a.check_same(b);
        const auto &sp = a.m_space;
        CohClass out(sp);
        for (std::size_t i = 0; i < a.m_coeffs.size(); ++i) {
            if (sgn(a.m_coeffs[i]) == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.m_coeffs.size(); ++j) {
                if (sgn(b.m_coeffs[j]) == 0) {
                    continue;
                }
                const auto k = sp.product_index(i, j);
                if (k != sp.size()) {
                    out.m_coeffs[k] += a.m_coeffs[i] * b.m_coeffs[j];
                }
            }
        }
        return out;
    }
    CohClass &operator*=(const CohClass &o)
    {
        return *this = *this * o;
    }
    friend bool operator==(const CohClass &a, const CohClass &b)
    {
        return a.m_space == b.m_space && a.m_coeffs == b.m_coeffs;
    }

    CohClass pow(unsigned k) const
    {
        CohClass r = unit(m_space);
        for (unsigned i = 0; i < k; ++i) {
            r *= *this;
        }
        return r;
    }

    // Inverse in the ring; exists iff the scalar part is nonzero.
    CohClass inverse() const
    {
        if (sgn(m_coeffs[0]) == 0) {
            throw NonInvertible("cohom", "class has zero scalar part");
        }
        const Rational c = m_coeffs[0];
        CohClass nil = *this * (1 / c);
        nil.m_coeffs[0] -= 1;
        // (1 + n)^{-1} = sum (-n)^k, finite since n is nilpotent.
        CohClass term = unit(m_space);
        CohClass sum = unit(m_space);
        const CohClass neg = -nil;
        for (int k = 0; k < m_space.dimension(); ++k) {
            term *= neg;
            if (term.is_zero()) {
                break;
            }
            sum += term;
        }
        return sum * (1 / c);
    }

    // Drop every component of cohomological degree != d.
    CohClass homogeneous_part(int d) const
    {
        CohClass out(m_space);
        for (std::size_t i = 0; i < m_coeffs.size(); ++i) {
            if (m_space.degree_of(i) == d) {
                out.m_coeffs[i] = m_coeffs[i];
            }
        }
        return out;
    }

    std::string to_string() const
    {
        std::string s;
        for (auto idx : m_space.basis_grlex()) {
            if (sgn(m_coeffs[idx]) == 0) {
                continue;
            }
            if (!s.empty()) {
                s += " + ";
            }
            s += m_coeffs[idx].get_str();
            const auto e = m_space.exponent(idx);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] > 0) {
                    s += "*p" + std::to_string(i + 1) + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
                }
            }
        }
        return s.empty() ? "0" : s;
    }

private:
    void check_same(const CohClass &o) const
    {
        if (!(m_space == o.m_space)) {
            throw MismatchError("cohom", "cohomology classes live on different ambient spaces");
        }
    }

    AmbientSpace m_space;
    std::vector<Rational> m_coeffs;
};

inline CohClass ring_mul(const CohClass &a, const CohClass &b, const AmbientSpace &space)
{
    if (!(a.space() == space) || !(b.space() == space)) {
        throw MismatchError("cohom", "ring_mul: operand is not on the requested ambient space");
    }
    return a * b;
}

// Coefficient of the point class prod p_i^{r_i}.
inline Rational integrate(const AmbientSpace &space, const CohClass &c)
{
    if (!(c.space() == space)) {
        throw MismatchError("cohom", "integrate: class is not on the requested ambient space");
    }
    return c[space.top_index()];
}

// Split bundle sum_j O(l_j). The sign pattern of each multidegree decides
// convexity; see twist.hpp.
struct LineBundle {
    std::vector<int> l;
    friend bool operator==(const LineBundle &, const LineBundle &) = default;
};

struct BundleSpec {
    std::vector<LineBundle> lines;

    std::size_t rank() const noexcept
    {
        return lines.size();
    }
    friend bool operator==(const BundleSpec &, const BundleSpec &) = default;

    friend BundleSpec operator+(BundleSpec a, const BundleSpec &b)
    {
        a.lines.insert(a.lines.end(), b.lines.begin(), b.lines.end());
        return a;
    }
};

inline void validate_bundle(const AmbientSpace &space, const BundleSpec &bundle)
{
    for (const auto &line : bundle.lines) {
        if (line.l.size() != space.num_factors()) {
            throw MismatchError("cohom", "line bundle multidegree has " + std::to_string(line.l.size())
                                             + " entries, ambient has " + std::to_string(space.num_factors())
                                             + " factors");
        }
        if (std::all_of(line.l.begin(), line.l.end(), [](int x) { return x == 0; })) {
            throw InvalidArgument("cohom", "trivial line bundle O(0) is not allowed in a bundle");
        }
    }
}

// prod_j (sum_i l_{j,i} p_i)
inline CohClass euler_class(const AmbientSpace &space, const BundleSpec &bundle)
{
    validate_bundle(space, bundle);
    CohClass e = CohClass::unit(space);
    for (const auto &line : bundle.lines) {
        e *= CohClass::linear(space, line.l);
    }
    return e;
}

} // namespace qlef
