#pragma once

// Arbitrary-precision arithmetic layer: exact rationals (GMP), complex
// floating values at configurable precision (MPFR), exact Gaussian
// rationals, polynomial heights and rational number reconstruction.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rurcert {

using Int = mpz_class;
using Rational = mpq_class;

inline constexpr unsigned kDefaultPrecisionBits = 212;

struct ArithError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Rational helpers

inline Rational rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// mpz/mpq string constructors auto-detect the base, so leading zeros would
// read as octal; always parse base 10.
inline Int int_from_string(const std::string& s) {
    Int z;
    if (z.set_str(s, 10) != 0) throw ArithError("bad integer literal: " + s);
    return z;
}

inline Rational rational_from_string(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw ArithError("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

// Parses a decimal string like "-2.188" or "1.5e-3" into the exact rational
// it denotes.
inline Rational rational_from_decimal(const std::string& s) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
    std::string digits;
    long frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    long exp10 = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = s[i++] == '-';
        if (i >= s.size()) throw ArithError("bad decimal literal: " + s);
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw ArithError("bad decimal literal: " + s);
            exp10 = exp10 * 10 + (s[i] - '0');
        }
        if (eneg) exp10 = -exp10;
    }
    if (!seen_digit || i != s.size()) throw ArithError("bad decimal literal: " + s);
    Int num = int_from_string(digits.empty() ? "0" : digits);
    Rational r(num);
    long e = exp10 - frac_digits;
    Int p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    if (e < 0)
        r /= Rational(p10);
    else
        r *= Rational(p10);
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

inline std::string rational_to_string(const Rational& r) { return r.get_str(); }

// log of a positive big integer, accurate to double roundoff.
inline double log_mpz(const Int& z) {
    if (z <= 0) throw ArithError("log_mpz: nonpositive argument");
    signed long exp2;
    double d = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(d) + static_cast<double>(exp2) * std::log(2.0);
}

// log of a positive rational.
inline double log_mpq(const Rational& r) {
    if (r <= 0) throw ArithError("log_mpq: nonpositive argument");
    return log_mpz(r.get_num()) - log_mpz(r.get_den());
}

// ---------------------------------------------------------------------------
// BigFloat: real floating value at a fixed precision (MPFR)

class BigFloat {
  public:
    BigFloat() : BigFloat(kDefaultPrecisionBits) {}
    explicit BigFloat(unsigned prec) { mpfr_init2(f_, prec); mpfr_set_zero(f_, 1); }
    BigFloat(double x, unsigned prec) { mpfr_init2(f_, prec); mpfr_set_d(f_, x, MPFR_RNDN); }
    BigFloat(long x, unsigned prec) { mpfr_init2(f_, prec); mpfr_set_si(f_, x, MPFR_RNDN); }
    BigFloat(const Rational& r, unsigned prec) {
        mpfr_init2(f_, prec);
        mpfr_set_q(f_, r.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(const BigFloat& o) { mpfr_init2(f_, o.precision()); mpfr_set(f_, o.f_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(f_, o.precision()); mpfr_swap(f_, o.f_); }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(f_, o.precision());
            mpfr_set(f_, o.f_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(f_, o.f_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(f_); }

    unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(f_)); }

    static BigFloat zero(unsigned prec) { return BigFloat(prec); }
    static BigFloat one(unsigned prec) { return BigFloat(1L, prec); }

    bool is_zero() const { return mpfr_zero_p(f_) != 0; }
    bool is_finite() const { return mpfr_number_p(f_) != 0; }
    int sign() const { return mpfr_sgn(f_); }
    double to_double() const { return mpfr_get_d(f_, MPFR_RNDN); }

    // Exact value as a rational (every finite binary float is dyadic).
    Rational to_rational() const {
        if (!is_finite()) throw ArithError("float_to_rational: non-finite input");
        if (is_zero()) return Rational(0);
        Int m;
        mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), f_);
        Rational r(m);
        if (e >= 0) {
            mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
        } else {
            mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
        }
        r.canonicalize();
        return r;
    }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat r(check(a, b)); mpfr_add(r.f_, a.f_, b.f_, MPFR_RNDN); return r;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat r(check(a, b)); mpfr_sub(r.f_, a.f_, b.f_, MPFR_RNDN); return r;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat r(check(a, b)); mpfr_mul(r.f_, a.f_, b.f_, MPFR_RNDN); return r;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat r(check(a, b)); mpfr_div(r.f_, a.f_, b.f_, MPFR_RNDN); return r;
    }
    BigFloat operator-() const { BigFloat r(precision()); mpfr_neg(r.f_, f_, MPFR_RNDN); return r; }
    BigFloat& operator+=(const BigFloat& b) { return *this = *this + b; }
    BigFloat& operator-=(const BigFloat& b) { return *this = *this - b; }
    BigFloat& operator*=(const BigFloat& b) { return *this = *this * b; }
    BigFloat& operator/=(const BigFloat& b) { return *this = *this / b; }

    BigFloat abs() const { BigFloat r(precision()); mpfr_abs(r.f_, f_, MPFR_RNDN); return r; }
    BigFloat sqrt() const { BigFloat r(precision()); mpfr_sqrt(r.f_, f_, MPFR_RNDN); return r; }
    BigFloat ldexp(long e) const {
        BigFloat r(precision());
        mpfr_mul_2si(r.f_, f_, e, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.f_, b.f_) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.f_, b.f_) > 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.f_, b.f_) <= 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.f_, b.f_) >= 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.f_, b.f_) == 0; }

    std::string to_string() const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.Re", f_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

  private:
    // Mixed-precision operands promote to the larger precision, so additive
    // and multiplicative identities at the default precision are harmless.
    static unsigned check(const BigFloat& a, const BigFloat& b) {
        return std::max(a.precision(), b.precision());
    }
    mpfr_t f_;
};

// ---------------------------------------------------------------------------
// CFloat: complex floating value, both parts at the same precision

struct CFloat {
    BigFloat re, im;

    CFloat() = default;
    explicit CFloat(unsigned prec) : re(prec), im(prec) {}
    CFloat(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
    CFloat(double r, double i, unsigned prec) : re(r, prec), im(i, prec) {}

    unsigned precision() const { return re.precision(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    static CFloat zero(unsigned prec) { return CFloat(prec); }
    static CFloat one(unsigned prec) { return CFloat(BigFloat::one(prec), BigFloat::zero(prec)); }
    static CFloat from_rational(const Rational& r, unsigned prec) {
        return CFloat(BigFloat(r, prec), BigFloat::zero(prec));
    }

    friend CFloat operator+(const CFloat& a, const CFloat& b) { return {a.re + b.re, a.im + b.im}; }
    friend CFloat operator-(const CFloat& a, const CFloat& b) { return {a.re - b.re, a.im - b.im}; }
    friend CFloat operator*(const CFloat& a, const CFloat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend CFloat operator/(const CFloat& a, const CFloat& b) {
        BigFloat n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    CFloat operator-() const { return {-re, -im}; }
    CFloat& operator+=(const CFloat& b) { return *this = *this + b; }
    CFloat& operator-=(const CFloat& b) { return *this = *this - b; }
    CFloat& operator*=(const CFloat& b) { return *this = *this * b; }

    CFloat conj() const { return {re, -im}; }
    BigFloat norm2() const { return re * re + im * im; }
    BigFloat abs() const { return norm2().sqrt(); }

    bool operator==(const CFloat& b) const { return re == b.re && im == b.im; }
};

// ---------------------------------------------------------------------------
// GaussRational: exact complex rational (the exact image of a CFloat)

struct GaussRational {
    Rational re, im;

    GaussRational() : re(0), im(0) {}
    GaussRational(Rational r) : re(std::move(r)), im(0) {}
    GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussRational(long v) : re(v), im(0) {}

    static GaussRational from_cfloat(const CFloat& z) {
        return {z.re.to_rational(), z.im.to_rational()};
    }
    CFloat to_cfloat(unsigned prec) const { return {BigFloat(re, prec), BigFloat(im, prec)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussRational operator/(const GaussRational& a, const GaussRational& b) {
        Rational n = b.re * b.re + b.im * b.im;
        if (n == 0) throw ArithError("GaussRational: division by zero");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    GaussRational operator-() const { return {-re, -im}; }
    GaussRational& operator+=(const GaussRational& b) { return *this = *this + b; }
    GaussRational& operator-=(const GaussRational& b) { return *this = *this - b; }
    GaussRational& operator*=(const GaussRational& b) { return *this = *this * b; }

    bool operator==(const GaussRational& b) const { return re == b.re && im == b.im; }
    bool operator!=(const GaussRational& b) const { return !(*this == b); }

    // Squared modulus, exact.
    Rational norm2() const { return re * re + im * im; }
};

inline Rational float_to_rational(const BigFloat& x) { return x.to_rational(); }

// ---------------------------------------------------------------------------
// Rational number reconstruction

// Finds the unique pair (z, d) with 1 <= d <= B and |c - z/d| < 1/(2B^2),
// if one exists.  Any qualifying fraction is a continued-fraction convergent
// of c, and successive convergents are strictly better approximations, so
// only the last convergent with denominator <= B needs checking.
inline std::optional<std::pair<Int, Int>> rat_reconstruct(const Rational& c, const Int& B) {
    if (B < 1) throw ArithError("rat_reconstruct: B must be >= 1");
    Int n = c.get_num(), den = c.get_den();
    // Convergents p/q of n/den.
    Int p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
    Int p = 0, q = 1;            // will become p_0/q_0 after first step
    {
        Int a, r;
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), den.get_mpz_t());
        p = a;  // p_0 = a_0, q_0 = 1
        n = den;
        den = r;
    }
    while (den != 0) {
        Int a, r;
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), den.get_mpz_t());
        Int p_next = a * p + p_prev;
        Int q_next = a * q + q_prev;
        if (q_next > B) break;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        n = den;
        den = r;
    }
    // Candidate p/q: check |c - p/q| < 1/(2B^2) exactly.
    Rational cand(p, q);
    cand.canonicalize();
    Rational diff = c - cand;
    if (diff < 0) diff = -diff;
    Rational tol(Int(1), 2 * B * B);
    tol.canonicalize();
    if (diff < tol) return std::make_pair(Int(cand.get_num()), Int(cand.get_den()));
    return std::nullopt;
}

// B := ceil((2E)^{-1/2}), computed with exact integer arithmetic.
// B is the smallest positive integer with 2*E*B^2 >= 1.
inline Int bound_B(const Rational& E) {
    if (E <= 0) throw ArithError("bound_B: E must be positive");
    Int a = 2 * E.get_num();  // 1/(2E) = den / (2 num)
    Int b = E.get_den();
    Int quo;
    mpz_cdiv_q(quo.get_mpz_t(), b.get_mpz_t(), a.get_mpz_t());
    Int B;
    mpz_sqrt(B.get_mpz_t(), quo.get_mpz_t());
    if (B < 1) B = 1;
    while (a * B * B < b) ++B;
    while (B > 1 && a * (B - 1) * (B - 1) >= b) --B;
    return B;
}

// Height of a nonzero rational coefficient vector: clear denominators to an
// integer vector and return max|b_i| / gcd(b_i).  Independent of the integer
// multiple chosen.
struct HeightValue {
    Int height;
    double log_height;
};

inline HeightValue height_of_coeffs(const std::vector<Rational>& coeffs) {
    Int lcm = 1;
    bool any = false;
    for (const auto& c : coeffs) {
        if (c == 0) continue;
        any = true;
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    if (!any) throw ArithError("height: zero polynomial");
    Int maxabs = 0, g = 0;
    for (const auto& c : coeffs) {
        if (c == 0) continue;
        Int b = c.get_num() * (lcm / c.get_den());
        mpz_abs(b.get_mpz_t(), b.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), b.get_mpz_t());
        if (b > maxabs) maxabs = b;
    }
    Int h = maxabs / g;
    return HeightValue{h, log_mpz(h)};
}

}  // namespace rurcert
