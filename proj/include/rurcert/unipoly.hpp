#pragma once

// Dense univariate polynomials over a coefficient field (Rational,
// GaussRational or CFloat), quotient-ring arithmetic mod a monic modulus,
// and linear algebra over the quotient ring.

#include "rurcert/arith.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace rurcert {

struct PolyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInvertible : PolyError {
    explicit NotInvertible(std::string gcd_text)
        : PolyError("element not invertible mod q, gcd = " + gcd_text),
          gcd(std::move(gcd_text)) {}
    std::string gcd;  // canonical text of gcd(a, q)
};

struct SingularModQ : PolyError {
    explicit SingularModQ(std::size_t col)
        : PolyError("no invertible pivot in column " + std::to_string(col)), column(col) {}
    std::size_t column;
};

// Coefficient-field glue.  Exact fields use exact zero tests.
template <class T>
struct field_traits;

template <>
struct field_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static bool is_zero(const Rational& x) { return x == 0; }
    static Rational from_rational(const Rational& r) { return r; }
    static Rational inv(const Rational& x) { return Rational(1) / x; }
};

template <>
struct field_traits<GaussRational> {
    static constexpr bool exact = true;
    static GaussRational zero() { return GaussRational(); }
    static GaussRational one() { return GaussRational(1); }
    static bool is_zero(const GaussRational& x) { return x.is_zero(); }
    static GaussRational from_rational(const Rational& r) { return GaussRational(r); }
    static GaussRational inv(const GaussRational& x) { return GaussRational(1) / x; }
};

template <>
struct field_traits<CFloat> {
    static constexpr bool exact = false;
    static CFloat zero() { return CFloat(kDefaultPrecisionBits); }
    static CFloat one() { return CFloat::one(kDefaultPrecisionBits); }
    static bool is_zero(const CFloat& x) { return x.is_zero(); }
    static CFloat from_rational(const Rational& r) {
        return CFloat::from_rational(r, kDefaultPrecisionBits);
    }
    static CFloat inv(const CFloat& x) { return CFloat::one(x.precision()) / x; }
};

// Rational-to-scalar conversion that follows the precision of a sample
// value; exact fields ignore the sample.
template <class T>
T scalar_from_rational(const Rational& r, const T&) {
    return field_traits<T>::from_rational(r);
}
inline CFloat scalar_from_rational(const Rational& r, const CFloat& sample) {
    return CFloat::from_rational(r, sample.precision());
}

template <class T>
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UniPoly constant(T v) { return UniPoly(std::vector<T>{std::move(v)}); }
    static UniPoly identity() {  // the polynomial T
        return UniPoly(std::vector<T>{field_traits<T>::zero(), field_traits<T>::one()});
    }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
    const std::vector<T>& coeffs() const { return c_; }

    // Coefficient of T^i (zero beyond the stored degree).
    T coeff(std::size_t i) const {
        return i < c_.size() ? c_[i] : field_traits<T>::zero();
    }
    const T& leading() const { return c_.back(); }

    bool is_monic() const {
        return !c_.empty() && field_traits<T>::is_zero(c_.back() - field_traits<T>::one());
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<T> r(std::max(a.c_.size(), b.c_.size()), field_traits<T>::zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
        return UniPoly(std::move(r));
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
        std::vector<T> r(std::max(a.c_.size(), b.c_.size()), field_traits<T>::zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] - b.c_[i];
        return UniPoly(std::move(r));
    }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return UniPoly();
        std::vector<T> r(a.c_.size() + b.c_.size() - 1, field_traits<T>::zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        return UniPoly(std::move(r));
    }
    UniPoly operator-() const {
        std::vector<T> r;
        r.reserve(c_.size());
        for (const auto& x : c_) r.push_back(-x);
        return UniPoly(std::move(r));
    }
    friend UniPoly operator*(const T& s, const UniPoly& p) {
        std::vector<T> r;
        r.reserve(p.c_.size());
        for (const auto& x : p.c_) r.push_back(s * x);
        return UniPoly(std::move(r));
    }

    bool operator==(const UniPoly& b) const {
        if (c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!field_traits<T>::is_zero(c_[i] - b.c_[i])) return false;
        return true;
    }
    bool operator!=(const UniPoly& b) const { return !(*this == b); }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<T> r;
        r.reserve(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            r.push_back(field_traits<T>::from_rational(Rational(static_cast<long>(i))) * c_[i]);
        return UniPoly(std::move(r));
    }

    T eval(const T& x) const {
        T acc = field_traits<T>::zero();
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    template <class U, class Conv>
    UniPoly<U> map(Conv conv) const {
        std::vector<U> r;
        r.reserve(c_.size());
        for (const auto& x : c_) r.push_back(conv(x));
        return UniPoly<U>(std::move(r));
    }

  private:
    void trim() {
        while (!c_.empty() && field_traits<T>::is_zero(c_.back())) c_.pop_back();
    }
    std::vector<T> c_;
};

template <class T>
struct DivisionResult {
    UniPoly<T> quotient;
    UniPoly<T> remainder;
};

// Division with remainder by a monic modulus: A = m*q + r, deg r < deg q.
template <class T>
DivisionResult<T> divrem(const UniPoly<T>& A, const UniPoly<T>& q) {
    if (q.degree() < 1 || !q.is_monic()) throw PolyError("divrem: modulus must be monic, deg >= 1");
    std::vector<T> rem(A.coeffs());
    long dq = q.degree();
    long dr = A.degree();
    if (dr < dq) return {UniPoly<T>(), A};
    std::vector<T> quo(static_cast<std::size_t>(dr - dq + 1), field_traits<T>::zero());
    for (long i = dr; i >= dq; --i) {
        T c = rem[static_cast<std::size_t>(i)];
        if (field_traits<T>::is_zero(c)) continue;
        quo[static_cast<std::size_t>(i - dq)] = c;
        for (long j = 0; j <= dq; ++j)
            rem[static_cast<std::size_t>(i - dq + j)] =
                rem[static_cast<std::size_t>(i - dq + j)] - c * q.coeff(static_cast<std::size_t>(j));
    }
    rem.resize(static_cast<std::size_t>(dq));
    return {UniPoly<T>(std::move(quo)), UniPoly<T>(std::move(rem))};
}

// Monic gcd over an exact field.
template <class T>
UniPoly<T> poly_gcd(UniPoly<T> a, UniPoly<T> b) {
    static_assert(field_traits<T>::exact, "poly_gcd needs exact arithmetic");
    auto make_monic = [](UniPoly<T> p) {
        if (p.is_zero() || p.is_monic()) return p;
        return field_traits<T>::inv(p.leading()) * p;
    };
    while (!b.is_zero()) {
        if (b.degree() == 0) return UniPoly<T>::constant(field_traits<T>::one());
        UniPoly<T> r = divrem(a, make_monic(b)).remainder;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

// true iff gcd(q, q') = 1.
template <class T>
bool squarefree_check(const UniPoly<T>& q) {
    if (q.is_zero()) throw PolyError("squarefree_check: zero polynomial");
    if (q.degree() == 0) return true;
    return poly_gcd(q, q.derivative()).degree() == 0;
}

template <class T>
std::string poly_text(const UniPoly<T>& p);  // defined after printing helpers

// Quotient ring context Q[T]/<q(T)> with monic q.
template <class T>
struct QuotientCtxT {
    UniPoly<T> modulus;

    explicit QuotientCtxT(UniPoly<T> q) : modulus(std::move(q)) {
        if (modulus.degree() < 1 || !modulus.is_monic())
            throw PolyError("QuotientCtx: modulus must be monic, deg >= 1");
    }
    long degree() const { return modulus.degree(); }

    UniPoly<T> reduce(const UniPoly<T>& a) const { return divrem(a, modulus).remainder; }
    UniPoly<T> mul(const UniPoly<T>& a, const UniPoly<T>& b) const { return reduce(a * b); }
};

using QuotientCtx = QuotientCtxT<Rational>;

// Extended Euclid: a * result == 1 mod q.  Throws NotInvertible with the
// nontrivial gcd as witness.
template <class T>
UniPoly<T> modinv(const UniPoly<T>& a, const QuotientCtxT<T>& ctx) {
    static_assert(field_traits<T>::exact, "modinv needs exact arithmetic");
    UniPoly<T> r0 = ctx.modulus, r1 = ctx.reduce(a);
    UniPoly<T> s0, s1 = UniPoly<T>::constant(field_traits<T>::one());
    if (r1.is_zero()) throw NotInvertible(poly_text(ctx.modulus));
    while (!r1.is_zero()) {
        // Invariant: r1 = s1 * a + (...) * q, so a constant r1 finishes.
        if (r1.degree() == 0)
            return ctx.reduce(field_traits<T>::inv(r1.leading()) * s1);
        auto [quo, rem] = divrem(r0, field_traits<T>::inv(r1.leading()) * r1);
        quo = field_traits<T>::inv(r1.leading()) * quo;
        UniPoly<T> s2 = s0 - quo * s1;
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0.degree() != 0) {
        UniPoly<T> g = field_traits<T>::inv(r0.leading()) * r0;
        throw NotInvertible(poly_text(g));
    }
    return ctx.reduce(field_traits<T>::inv(r0.leading()) * s0);
}

// Gaussian elimination over Q[T]/<q>: pivot is the first row (lowest index)
// whose entry is invertible mod q.  Deterministic column order.
template <class T>
std::vector<UniPoly<T>> solve_mod(std::vector<std::vector<UniPoly<T>>> M,
                                  std::vector<UniPoly<T>> b, const QuotientCtxT<T>& ctx) {
    const std::size_t n = M.size();
    if (b.size() != n) throw PolyError("solve_mod: dimension mismatch");
    for (auto& row : M) {
        if (row.size() != n) throw PolyError("solve_mod: matrix not square");
        for (auto& e : row) e = ctx.reduce(e);
    }
    for (auto& e : b) e = ctx.reduce(e);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        UniPoly<T> piv_inv;
        for (std::size_t row = col; row < n; ++row) {
            if (M[row][col].is_zero()) continue;
            try {
                piv_inv = modinv(M[row][col], ctx);
                piv = row;
                break;
            } catch (const NotInvertible&) {
                continue;
            }
        }
        if (piv == n) throw SingularModQ(col);
        std::swap(M[col], M[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t j = col; j < n; ++j) M[col][j] = ctx.mul(M[col][j], piv_inv);
        b[col] = ctx.mul(b[col], piv_inv);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || M[row][col].is_zero()) continue;
            UniPoly<T> f = M[row][col];
            for (std::size_t j = col; j < n; ++j)
                M[row][j] = ctx.reduce(M[row][j] - f * M[col][j]);
            b[row] = ctx.reduce(b[row] - f * b[col]);
        }
    }
    return b;
}

// Canonical text form: descending powers, coefficients as "num/den".
inline std::string coeff_text(const Rational& c) { return rational_to_string(c); }
inline std::string coeff_text(const GaussRational& c) {
    if (c.im == 0) return rational_to_string(c.re);
    return "(" + rational_to_string(c.re) + "+" + rational_to_string(c.im) + "*i)";
}

template <class T>
std::string poly_text(const UniPoly<T>& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (long i = p.degree(); i >= 0; --i) {
        T c = p.coeff(static_cast<std::size_t>(i));
        if (field_traits<T>::is_zero(c)) continue;
        std::string cs = coeff_text(c);
        if (!out.empty()) {
            if (cs[0] == '-') {
                out += " - ";
                cs.erase(0, 1);
            } else {
                out += " + ";
            }
        }
        if (i == 0) {
            out += cs;
        } else {
            if (cs != "1") out += cs + "*";
            out += i == 1 ? "T" : "T^" + std::to_string(i);
        }
    }
    return out;
}

}  // namespace rurcert
