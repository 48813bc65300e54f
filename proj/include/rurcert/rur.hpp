#pragma once

// Construction of approximate RURs from approximate roots (Lagrange
// interpolation, direct or Chebyshev-basis), local Newton refinement of the
// underlying points, and the associated rigorous error estimates.

#include "rurcert/arith.hpp"
#include "rurcert/multipoly.hpp"
#include "rurcert/numeric.hpp"
#include "rurcert/system.hpp"
#include "rurcert/unipoly.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace rurcert {

struct NodesOutOfRange : PolyError {
    using PolyError::PolyError;
};

// Approximate-flavor RUR.  Coefficients are stored as exact Gaussian
// rationals: the exact images of the floating values they were computed
// from, so no roundoff enters after interpolation.
struct ApproxRur {
    PrimitiveElement lambda;
    UniPoly<GaussRational> q;
    std::vector<UniPoly<GaussRational>> v;

    long degree() const { return q.degree(); }

    // Largest |imaginary part| over all coefficients (sanity indicator;
    // dropped at reconstruction time).
    Rational imag_residue() const {
        Rational worst(0);
        auto scan = [&worst](const UniPoly<GaussRational>& p) {
            for (const auto& c : p.coeffs()) {
                Rational a = c.im < 0 ? -c.im : c.im;
                if (a > worst) worst = a;
            }
        };
        scan(q);
        for (const auto& vi : v) scan(vi);
        return worst;
    }
};

// Exact-flavor RUR over Q.
struct ExactRur {
    std::vector<Rational> lambda;
    UniPoly<Rational> q;
    std::vector<UniPoly<Rational>> v;

    long degree() const { return q.degree(); }

    bool operator==(const ExactRur& b) const {
        return lambda == b.lambda && q == b.q && v == b.v;
    }
};

struct ErrorEstimate {
    Rational E;
    unsigned k = 0;
    enum class Source { LocalBound, GlobalBound, Override } source = Source::LocalBound;
};

enum class InterpolationMode { Auto, Direct, Chebyshev };

// mu_i = sum_j lambda_j z_{i,j}
inline std::vector<CFloat> mu_values(const PrimitiveElement& lambda,
                                     const ApproxRootSet& points) {
    std::vector<CFloat> mu;
    mu.reserve(points.size());
    for (const auto& z : points.points) mu.push_back(mu_of(lambda.lambda, z));
    return mu;
}

// q(T) = prod_i (T - mu_i), expanded.
template <class T>
UniPoly<T> build_q(const std::vector<T>& mu) {
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = i + 1; j < mu.size(); ++j)
            if (field_traits<T>::is_zero(mu[i] - mu[j]))
                throw PolyError("build_q: duplicate nodes");
    UniPoly<T> q = UniPoly<T>::constant(field_traits<T>::one());
    for (const auto& m : mu) {
        UniPoly<T> lin(std::vector<T>{-m, field_traits<T>::one()});
        q = q * lin;
    }
    return q;
}

// Direct Lagrange interpolation: the unique polynomial of degree <= d-1
// with p(mu_i) = values_i.
template <class T>
UniPoly<T> interpolate_direct(const std::vector<T>& mu, const std::vector<T>& values) {
    if (mu.size() != values.size() || mu.empty())
        throw PolyError("interpolate: node/value count mismatch");
    UniPoly<T> acc;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        UniPoly<T> num = UniPoly<T>::constant(field_traits<T>::one());
        T den = field_traits<T>::one();
        for (std::size_t j = 0; j < mu.size(); ++j) {
            if (j == i) continue;
            num = num * UniPoly<T>(std::vector<T>{-mu[j], field_traits<T>::one()});
            T diff = mu[i] - mu[j];
            if (field_traits<T>::is_zero(diff)) throw PolyError("interpolate: duplicate nodes");
            den = den * diff;
        }
        acc = acc + (values[i] * field_traits<T>::inv(den)) * num;
    }
    return acc;
}

// Chebyshev-basis interpolation: coefficients in the Chebyshev basis via a
// dense solve, then the triangular change of basis back to monomials.
// Nodes must lie in the (complex) unit range.
inline UniPoly<CFloat> interpolate_chebyshev(const CVector& mu, const CVector& values) {
    if (mu.size() != values.size() || mu.empty())
        throw PolyError("interpolate: node/value count mismatch");
    const std::size_t d = mu.size();
    const unsigned prec = mu[0].precision();
    BigFloat lim = BigFloat::one(prec) + BigFloat::one(prec).ldexp(-20);
    for (const auto& x : mu)
        if (x.abs() > lim) throw NodesOutOfRange("chebyshev interpolation: node outside [-1,1]");
    // M[i][j] = T_j(mu_i)
    CMatrix M(d, CVector(d, CFloat::zero(prec)));
    for (std::size_t i = 0; i < d; ++i) {
        CFloat t0 = CFloat::one(prec), t1 = mu[i];
        for (std::size_t j = 0; j < d; ++j) {
            M[i][j] = j == 0 ? t0 : t1;
            if (j >= 1) {
                CFloat t2 = CFloat(2.0, 0.0, prec) * mu[i] * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
        }
    }
    CVector a = solve_linear(std::move(M), values);
    // Monomial expansions of T_j by the recurrence, accumulated with weights.
    UniPoly<CFloat> t0 = UniPoly<CFloat>::constant(CFloat::one(prec));
    UniPoly<CFloat> t1(std::vector<CFloat>{CFloat::zero(prec), CFloat::one(prec)});
    UniPoly<CFloat> two = UniPoly<CFloat>::constant(CFloat(2.0, 0.0, prec));
    UniPoly<CFloat> x = t1;
    UniPoly<CFloat> acc;
    for (std::size_t j = 0; j < d; ++j) {
        const UniPoly<CFloat>& tj = j == 0 ? t0 : t1;
        acc = acc + a[j] * tj;
        if (j >= 1) {
            UniPoly<CFloat> t2 = two * x * t1 - t0;
            t0 = t1;
            t1 = t2;
        }
    }
    return acc;
}

inline std::vector<GaussRational> points_to_exact_mu(const PrimitiveElement& lambda,
                                                     const ApproxRootSet& points) {
    std::vector<GaussRational> mu;
    mu.reserve(points.size());
    const bool exact = points.has_exact();
    for (std::size_t i = 0; i < points.size(); ++i) {
        GaussRational acc;
        for (std::size_t j = 0; j < lambda.lambda.size(); ++j) {
            GaussRational zj = exact ? points.exact_points[i][j]
                                     : GaussRational::from_cfloat(points.points[i][j]);
            acc += GaussRational(lambda.lambda[j]) * zj;
        }
        mu.push_back(acc);
    }
    return mu;
}

// Step 3 of the initialization: q from the mu values, v_j by interpolating
// the j-th coordinates.  Direct mode runs in exact Gaussian-rational
// arithmetic on the dyadic images of the points; Chebyshev mode runs at
// working precision and its result is then captured exactly.
inline ApproxRur build_rur(const ApproxRootSet& points, const PrimitiveElement& lambda,
                           InterpolationMode mode = InterpolationMode::Auto) {
    if (points.size() == 0) throw PolyError("build_rur: empty point set");
    const std::size_t n = points.points[0].size();
    const std::size_t d = points.size();
    if (mode == InterpolationMode::Auto)
        mode = d <= 8 ? InterpolationMode::Direct : InterpolationMode::Chebyshev;

    ApproxRur rur;
    rur.lambda = lambda;
    if (mode == InterpolationMode::Direct) {
        std::vector<GaussRational> mu = points_to_exact_mu(lambda, points);
        rur.q = build_q(mu);
        const bool exact = points.has_exact();
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<GaussRational> vals;
            vals.reserve(d);
            for (std::size_t i = 0; i < d; ++i)
                vals.push_back(exact ? points.exact_points[i][j]
                                     : GaussRational::from_cfloat(points.points[i][j]));
            rur.v.push_back(interpolate_direct(mu, vals));
        }
    } else {
        std::vector<CFloat> mu = mu_values(lambda, points);
        auto capture = [](const UniPoly<CFloat>& p) {
            return p.map<GaussRational>([](const CFloat& c) { return GaussRational::from_cfloat(c); });
        };
        rur.q = capture(build_q(mu));
        for (std::size_t j = 0; j < n; ++j) {
            CVector vals;
            vals.reserve(d);
            for (const auto& z : points.points) vals.push_back(z[j]);
            rur.v.push_back(capture(interpolate_chebyshev(mu, vals)));
        }
    }
    return rur;
}

// Local error bound E = eps * d^2 * (1/2)^(2^k - 1 - d).
inline Rational local_error_bound(const Rational& eps, long d, unsigned k) {
    if (k > 40) k = 40;  // bound already far below any usable tolerance
    Rational E = eps * Rational(d) * Rational(d);
    long e = (1L << k) - 1 - d;
    if (e >= 0)
        mpq_div_2exp(E.get_mpq_t(), E.get_mpq_t(), static_cast<unsigned long>(e));
    else
        mpq_mul_2exp(E.get_mpq_t(), E.get_mpq_t(), static_cast<unsigned long>(-e));
    E.canonicalize();
    return E;
}

// Local Newton loop: refine every point k steps against the square system F,
// rebuild the RUR, and report the Eq-of-accuracy bound.
inline std::pair<ApproxRur, ErrorEstimate> local_refine(const PolySystem& F,
                                                        const ApproxRootSet& points,
                                                        const PrimitiveElement& lambda,
                                                        unsigned k,
                                                        InterpolationMode mode = InterpolationMode::Auto) {
    ApproxRootSet refined = points;
    if (k > 0) {
        for (auto& z : refined.points) z = newton_refine(F, z, k);
        refined.exact_points.clear();  // the floats are the points now
    }
    ApproxRur rur = build_rur(refined, lambda, mode);
    ErrorEstimate est;
    est.k = k;
    est.source = ErrorEstimate::Source::LocalBound;
    est.E = local_error_bound(points.epsilon, rur.degree(), k);
    return {std::move(rur), est};
}

}  // namespace rurcert
