#pragma once

// Polynomial systems, approximate root sets, randomized squaring-up,
// Newton refinement of supplied roots, candidate selection, and
// primitive-element choice.

#include "rurcert/arith.hpp"
#include "rurcert/multipoly.hpp"
#include "rurcert/numeric.hpp"

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rurcert {

struct PolySystem {
    std::vector<std::string> variables;
    std::vector<MultiPoly> polynomials;

    std::size_t nvars() const { return variables.size(); }
    std::size_t size() const { return polynomials.size(); }

    long max_degree() const {
        long d = 0;
        for (const auto& p : polynomials)
            if (p.total_degree() > d) d = p.total_degree();
        return d;
    }
    // Max height over the polynomials (H) and its natural log (h).
    HeightValue max_height() const {
        Int best = 1;
        for (const auto& p : polynomials) {
            if (p.is_zero()) continue;
            HeightValue h = height_of_coeffs(p.coefficients());
            if (h.height > best) best = h.height;
        }
        return HeightValue{best, log_mpz(best)};
    }

    std::vector<CFloat> residuals(const CVector& z) const {
        std::vector<CFloat> r;
        r.reserve(polynomials.size());
        for (const auto& p : polynomials) r.push_back(p.eval(z));
        return r;
    }
};

struct ApproxRootSet {
    std::vector<CVector> points;
    // Optional exact coordinates of the same points (e.g. the rational values
    // of decimal input literals).  When present they drive the exact
    // interpolation path; the floats are then only used for refinement.
    std::vector<std::vector<GaussRational>> exact_points;
    Rational epsilon;     // upper bound on distance to the exact roots
    std::string source;   // provenance tag

    std::size_t size() const { return points.size(); }

    bool has_exact() const { return exact_points.size() == points.size() && !points.empty(); }
};

struct PrimitiveElement {
    std::vector<Rational> lambda;
    bool normalized = false;
};

struct SeparationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// F = R * f: the randomized square system of n linear combinations.
inline PolySystem randomize(const PolySystem& f, const std::vector<std::vector<Rational>>& R) {
    const std::size_t n = f.nvars(), m = f.size();
    if (R.size() != n) throw PolyError("randomize: R must have n rows");
    PolySystem F;
    F.variables = f.variables;
    for (std::size_t i = 0; i < n; ++i) {
        if (R[i].size() != m) throw PolyError("randomize: R must have m columns");
        MultiPoly acc(n);
        for (std::size_t j = 0; j < m; ++j) acc = acc + R[i][j] * f.polynomials[j];
        F.polynomials.push_back(std::move(acc));
    }
    return F;
}

// Seeded randomization matrix with entries uniform in [-99, 99].
inline std::vector<std::vector<Rational>> random_R(std::size_t n, std::size_t m,
                                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-99, 99);
    std::vector<std::vector<Rational>> R(n, std::vector<Rational>(m));
    for (auto& row : R)
        for (auto& e : row) e = Rational(dist(rng));
    return R;
}

inline CMatrix eval_jacobian(const std::vector<std::vector<MultiPoly>>& J, const CVector& z) {
    CMatrix M;
    M.reserve(J.size());
    for (const auto& row : J) {
        CVector r;
        r.reserve(row.size());
        for (const auto& p : row) r.push_back(p.eval(z));
        M.push_back(std::move(r));
    }
    return M;
}

// k steps of z <- z - J_F(z)^-1 F(z).  Per-step residuals recorded for the
// report.  Throws SingularJacobian when the numeric solve degenerates.
inline CVector newton_refine(const PolySystem& F, CVector z, unsigned k,
                             std::vector<BigFloat>* residual_trace = nullptr) {
    if (F.size() != F.nvars()) throw PolyError("newton_refine: system must be square");
    auto J = jacobian(F.polynomials);
    for (unsigned step = 0; step < k; ++step) {
        CVector fz;
        fz.reserve(F.size());
        for (const auto& p : F.polynomials) fz.push_back(p.eval(z));
        if (residual_trace) residual_trace->push_back(vec_norm2(fz));
        CVector dz = solve_linear(eval_jacobian(J, z), fz);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] -= dz[i];
    }
    if (residual_trace) {
        CVector fz;
        for (const auto& p : F.polynomials) fz.push_back(p.eval(z));
        residual_trace->push_back(vec_norm2(fz));
    }
    return z;
}

// Keeps the points with max_i |f_i(z)| <= t.  All residuals are reported.
inline ApproxRootSet select_candidates(const ApproxRootSet& roots, const PolySystem& f,
                                       const Rational& t,
                                       std::vector<double>* residual_report = nullptr) {
    if (t <= 0) throw PolyError("select_candidates: tolerance must be positive");
    ApproxRootSet kept;
    kept.epsilon = roots.epsilon;
    kept.source = roots.source;
    for (const auto& z : roots.points) {
        BigFloat worst = BigFloat::zero(z.at(0).precision());
        for (const auto& p : f.polynomials) {
            BigFloat r = p.eval(z).abs();
            if (r > worst) worst = r;
        }
        if (residual_report) residual_report->push_back(worst.to_double());
        if (worst <= BigFloat(t, z.at(0).precision())) kept.points.push_back(z);
    }
    return kept;
}

// Default candidate tolerance: eps * m * (D+1)^n * H (crude first-order bound).
inline Rational default_candidate_tolerance(const PolySystem& f, const Rational& eps) {
    Int pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(f.max_degree() + 1),
                  static_cast<unsigned long>(f.nvars()));
    return eps * Rational(static_cast<long>(f.size())) * Rational(pw) *
           Rational(f.max_height().height);
}

inline CFloat mu_of(const std::vector<Rational>& lambda, const CVector& z) {
    CFloat acc = CFloat::zero(z.at(0).precision());
    for (std::size_t j = 0; j < lambda.size(); ++j)
        acc += CFloat::from_rational(lambda[j], z[j].precision()) * z[j];
    return acc;
}

inline bool separation_ok(const std::vector<Rational>& lambda, const ApproxRootSet& points) {
    if (points.size() < 2) return true;
    const unsigned prec = points.points[0][0].precision();
    Rational norm2_sq(0);
    for (const auto& l : lambda) norm2_sq += l * l;
    BigFloat lim = BigFloat(Rational(4) * points.epsilon, prec) * BigFloat(norm2_sq, prec).sqrt();
    std::vector<CFloat> mus;
    for (const auto& z : points.points) mus.push_back(mu_of(lambda, z));
    for (std::size_t i = 0; i < mus.size(); ++i)
        for (std::size_t j = i + 1; j < mus.size(); ++j)
            if (!((mus[i] - mus[j]).abs() > lim)) return false;
    return true;
}

// Random lambda search over integer tuples in [-9, 9]^n until the mu values
// are pairwise separated by more than 4*epsilon*||lambda||_2.
inline PrimitiveElement choose_primitive(const ApproxRootSet& points, unsigned trials,
                                         std::uint64_t seed, bool normalize = false) {
    if (points.size() == 0) throw SeparationFailure("choose_primitive: no points");
    const std::size_t n = points.points[0].size();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-9, 9);
    for (unsigned t = 0; t < trials; ++t) {
        std::vector<Rational> lambda(n);
        bool nonzero = false;
        for (auto& l : lambda) {
            l = Rational(dist(rng));
            if (l != 0) nonzero = true;
        }
        if (!nonzero) continue;
        if (!separation_ok(lambda, points)) continue;
        PrimitiveElement pe{std::move(lambda), false};
        if (normalize) {
            // Scale so all mu values land in [-1, 1]: divide by the max
            // modulus, rounded up to the next power of two (keeps the
            // scaling exact).
            BigFloat maxmu = BigFloat::zero(points.points[0][0].precision());
            for (const auto& z : points.points) {
                BigFloat a = mu_of(pe.lambda, z).abs();
                if (a > maxmu) maxmu = a;
            }
            long shift = 0;
            BigFloat one = BigFloat::one(maxmu.precision());
            while (maxmu > one) {
                maxmu = maxmu.ldexp(-1);
                ++shift;
            }
            if (shift > 0) {
                Rational scale(Int(1), Int(1) << shift);
                scale.canonicalize();
                for (auto& l : pe.lambda) l *= scale;
            }
            pe.normalized = true;
        }
        return pe;
    }
    throw SeparationFailure("choose_primitive: separation failed after " +
                            std::to_string(trials) + " trials");
}

}  // namespace rurcert
