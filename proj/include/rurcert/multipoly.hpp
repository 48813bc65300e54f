#pragma once

// Sparse multivariate polynomials over Q: arithmetic, differentiation,
// evaluation, and symbolic composition into Q[T]/<q(T)>.

#include "rurcert/arith.hpp"
#include "rurcert/unipoly.hpp"

#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rurcert {

using Exponents = std::vector<unsigned>;

class MultiPoly {
  public:
    MultiPoly() : nvars_(0) {}
    explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}

    static MultiPoly constant(std::size_t nvars, Rational c) {
        MultiPoly p(nvars);
        p.add_term(Exponents(nvars, 0), std::move(c));
        return p;
    }
    static MultiPoly variable(std::size_t nvars, std::size_t j, Rational c = Rational(1)) {
        MultiPoly p(nvars);
        Exponents e(nvars, 0);
        e.at(j) = 1;
        p.add_term(std::move(e), std::move(c));
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Exponents, Rational>& terms() const { return terms_; }

    void add_term(Exponents e, Rational c) {
        if (e.size() != nvars_) throw PolyError("MultiPoly: exponent arity mismatch");
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), std::move(c));
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    long total_degree() const {
        long d = -1;
        for (const auto& [e, c] : terms_) {
            long t = std::accumulate(e.begin(), e.end(), 0L);
            if (t > d) d = t;
        }
        return d;
    }

    std::vector<Rational> coefficients() const {
        std::vector<Rational> out;
        out.reserve(terms_.size());
        for (const auto& [e, c] : terms_) out.push_back(c);
        return out;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        check(a, b);
        MultiPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
        check(a, b);
        MultiPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        check(a, b);
        MultiPoly r(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(a.nvars_);
                for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
                r.add_term(std::move(e), ca * cb);
            }
        return r;
    }
    friend MultiPoly operator*(const Rational& s, const MultiPoly& p) {
        MultiPoly r(p.nvars_);
        for (const auto& [e, c] : p.terms_) r.add_term(e, s * c);
        return r;
    }
    MultiPoly operator-() const { return Rational(-1) * *this; }

    bool operator==(const MultiPoly& b) const {
        return nvars_ == b.nvars_ && terms_ == b.terms_;
    }
    bool operator!=(const MultiPoly& b) const { return !(*this == b); }

    MultiPoly derivative(std::size_t j) const {
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e.at(j) == 0) continue;
            Exponents d = e;
            --d[j];
            r.add_term(std::move(d), c * Rational(static_cast<long>(e[j])));
        }
        return r;
    }

    // Evaluation at a point with coordinates of any field type.
    template <class T>
    T eval(const std::vector<T>& x) const {
        if (x.size() != nvars_) throw PolyError("MultiPoly::eval: arity mismatch");
        T acc = x.empty() ? field_traits<T>::zero() : scalar_from_rational(Rational(0), x[0]);
        for (const auto& [e, c] : terms_) {
            T t = scalar_from_rational(c, acc);
            for (std::size_t j = 0; j < nvars_; ++j)
                for (unsigned k = 0; k < e[j]; ++k) t = t * x[j];
            acc = acc + t;
        }
        return acc;
    }

  private:
    static void check(const MultiPoly& a, const MultiPoly& b) {
        if (a.nvars_ != b.nvars_) throw PolyError("MultiPoly: arity mismatch");
    }
    std::size_t nvars_;
    std::map<Exponents, Rational> terms_;
};

// f(v_1(T), ..., v_n(T)) mod q(T), with per-variable power tables kept
// reduced mod q so intermediate degrees stay below deg q.
template <class T>
UniPoly<T> compose_mod(const MultiPoly& f, const std::vector<UniPoly<T>>& v,
                       const QuotientCtxT<T>& ctx) {
    if (v.size() != f.nvars()) throw PolyError("compose_mod: arity mismatch");
    // Power tables, filled on demand.
    std::vector<std::vector<UniPoly<T>>> pow(v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        pow[j].push_back(UniPoly<T>::constant(field_traits<T>::one()));
    auto power = [&](std::size_t j, unsigned e) -> const UniPoly<T>& {
        while (pow[j].size() <= e) pow[j].push_back(ctx.mul(pow[j].back(), v[j]));
        return pow[j][e];
    };
    UniPoly<T> acc;
    for (const auto& [e, c] : f.terms()) {
        UniPoly<T> t = UniPoly<T>::constant(field_traits<T>::from_rational(c));
        for (std::size_t j = 0; j < v.size(); ++j)
            if (e[j] > 0) t = ctx.mul(t, power(j, e[j]));
        acc = acc + t;
    }
    return ctx.reduce(acc);
}

// Full symbolic composition without reduction (used by the global Newton
// division data, where the quotient matters).
template <class T>
UniPoly<T> compose_full(const MultiPoly& f, const std::vector<UniPoly<T>>& v) {
    if (v.size() != f.nvars()) throw PolyError("compose_full: arity mismatch");
    UniPoly<T> acc;
    for (const auto& [e, c] : f.terms()) {
        UniPoly<T> t = UniPoly<T>::constant(field_traits<T>::from_rational(c));
        for (std::size_t j = 0; j < v.size(); ++j)
            for (unsigned k = 0; k < e[j]; ++k) t = t * v[j];
        acc = acc + t;
    }
    return acc;
}

// Entry (i, j) = dF_i/dx_j, exact symbolic differentiation.
inline std::vector<std::vector<MultiPoly>> jacobian(const std::vector<MultiPoly>& F) {
    std::vector<std::vector<MultiPoly>> J;
    J.reserve(F.size());
    for (const auto& f : F) {
        std::vector<MultiPoly> row;
        row.reserve(f.nvars());
        for (std::size_t j = 0; j < f.nvars(); ++j) row.push_back(f.derivative(j));
        J.push_back(std::move(row));
    }
    return J;
}

// Canonical printing: graded reverse lexicographic term order, variables in
// declaration order, coefficients as "num/den".
inline bool grevlex_less(const Exponents& a, const Exponents& b) {
    long da = std::accumulate(a.begin(), a.end(), 0L);
    long db = std::accumulate(b.begin(), b.end(), 0L);
    if (da != db) return da < db;
    // Reverse lex: compare last differing exponent; larger there means smaller.
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

inline std::string poly_text(const MultiPoly& p, const std::vector<std::string>& vars) {
    if (p.is_zero()) return "0";
    std::vector<const std::pair<const Exponents, Rational>*> sorted;
    for (const auto& t : p.terms()) sorted.push_back(&t);
    std::sort(sorted.begin(), sorted.end(),
              [](auto* x, auto* y) { return grevlex_less(y->first, x->first); });
    std::string out;
    for (const auto* t : sorted) {
        const auto& [e, c] = *t;
        std::string term;
        bool all_zero = true;
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (e[j] == 0) continue;
            all_zero = false;
            if (!term.empty()) term += "*";
            term += vars.at(j);
            if (e[j] > 1) term += "^" + std::to_string(e[j]);
        }
        std::string cs = rational_to_string(c);
        std::string piece;
        if (all_zero)
            piece = cs;
        else if (cs == "1")
            piece = term;
        else if (cs == "-1")
            piece = "-" + term;
        else
            piece = cs + "*" + term;
        if (out.empty()) {
            out = piece;
        } else if (!piece.empty() && piece[0] == '-') {
            out += " - " + piece.substr(1);
        } else {
            out += " + " + piece;
        }
    }
    return out;
}

}  // namespace rurcert
