#pragma once

// Exact certification: rational reconstruction of a candidate RUR,
// symbolic verification against the input system, height-budget
// termination, iteration prediction, a minimal alpha-test, and the
// orchestrating pipeline.

#include "rurcert/arith.hpp"
#include "rurcert/gnewton.hpp"
#include "rurcert/multipoly.hpp"
#include "rurcert/numeric.hpp"
#include "rurcert/rur.hpp"
#include "rurcert/system.hpp"
#include "rurcert/unipoly.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rurcert {

// ---------------------------------------------------------------------------
// Rational reconstruction of a full RUR

// Coefficient-wise reconstruction with denominator bound B.  Imaginary
// parts are dropped.  Absent result means some coefficient has no rational
// with denominator <= B within 1/(2B^2).
inline std::optional<ExactRur> reconstruct_rur(const ApproxRur& approx, const Int& B) {
    auto reconstruct_poly = [&B](const UniPoly<GaussRational>& p) -> std::optional<UniPoly<Rational>> {
        std::vector<Rational> out;
        out.reserve(static_cast<std::size_t>(p.degree() + 1));
        for (long i = 0; i <= p.degree(); ++i) {
            auto zd = rat_reconstruct(p.coeff(static_cast<std::size_t>(i)).re, B);
            if (!zd) return std::nullopt;
            Rational c(zd->first, zd->second);
            c.canonicalize();
            out.push_back(std::move(c));
        }
        return UniPoly<Rational>(std::move(out));
    };
    ExactRur exact;
    exact.lambda = approx.lambda.lambda;
    auto q = reconstruct_poly(approx.q);
    if (!q) return std::nullopt;
    exact.q = std::move(*q);
    for (const auto& vi : approx.v) {
        auto r = reconstruct_poly(vi);
        if (!r) return std::nullopt;
        exact.v.push_back(std::move(*r));
    }
    return exact;
}

inline std::optional<ExactRur> reconstruct_rur(const ApproxRur& approx, const ErrorEstimate& est) {
    return reconstruct_rur(approx, bound_B(est.E));
}

// ---------------------------------------------------------------------------
// Exact verification

struct VerifyResult {
    bool ok = false;
    // 0 = passed; 1 = q not monic/square-free; 2 = deg v_i too large;
    // 3 = compatibility sum lambda_i v_i != T mod q; 4 = some f_i does not
    // reduce to zero.
    int failed_condition = 0;
    std::size_t witness_index = 0;               // offending f_i for condition 4
    std::vector<UniPoly<Rational>> remainders;   // f_i(v(T)) mod q, all of them
};

inline VerifyResult verify_rur(const PolySystem& f, const ExactRur& rur) {
    VerifyResult res;
    if (rur.q.degree() < 1 || !rur.q.is_monic() || !squarefree_check(rur.q)) {
        res.failed_condition = 1;
        return res;
    }
    const long d = rur.q.degree();
    for (std::size_t i = 0; i < rur.v.size(); ++i) {
        if (rur.v[i].degree() > d - 1) {
            res.failed_condition = 2;
            res.witness_index = i;
            return res;
        }
    }
    QuotientCtx ctx(rur.q);
    UniPoly<Rational> comb;
    for (std::size_t i = 0; i < rur.v.size(); ++i) comb = comb + rur.lambda[i] * rur.v[i];
    if (!ctx.reduce(comb - UniPoly<Rational>::identity()).is_zero()) {
        res.failed_condition = 3;
        return res;
    }
    bool all_zero = true;
    std::size_t first_bad = 0;
    for (std::size_t i = 0; i < f.polynomials.size(); ++i) {
        UniPoly<Rational> rem = compose_mod(f.polynomials[i], rur.v, ctx);
        if (!rem.is_zero() && all_zero) {
            all_zero = false;
            first_bad = i;
        }
        res.remainders.push_back(std::move(rem));
    }
    if (!all_zero) {
        res.failed_condition = 4;
        res.witness_index = first_bad;
        return res;
    }
    res.ok = true;
    return res;
}

// ---------------------------------------------------------------------------
// Height budget and termination

struct HeightBudget {
    std::size_t n = 0, m = 0;
    long D = 0;
    double h = 0.0;           // log height of the input system
    unsigned long delta = 0;  // root count of V(I)
    double h_prime = 0.0;     // 2(n-1) ln(n delta) + h
    double log_Hbound = 0.0;  // 12 n^4 h D^(n+1) ln(n delta)
    double log_Hbound2 = 0.0; // ln(H n delta) + 12 delta n^4 D^(n+1)
};

inline HeightBudget height_budget(const PolySystem& f, unsigned long delta) {
    if (delta < 1) throw ArithError("height_budget: delta must be >= 1");
    HeightBudget b;
    b.n = f.nvars();
    b.m = f.size();
    b.D = f.max_degree();
    b.h = f.max_height().log_height;
    b.delta = delta;
    double n = static_cast<double>(b.n);
    double lognd = std::log(n * static_cast<double>(delta));
    double n4 = n * n * n * n;
    double Dpow = std::pow(static_cast<double>(b.D), n + 1.0);
    b.h_prime = 2.0 * (n - 1.0) * lognd + b.h;
    b.log_Hbound = 12.0 * n4 * b.h * Dpow * lognd;
    b.log_Hbound2 = b.h + std::log(n * static_cast<double>(delta)) +
                    12.0 * static_cast<double>(delta) * n4 * Dpow;
    return b;
}

// true iff ln(B) >= log_Hbound2; comparisons happen in log scale so the raw
// (astronomical) bound is never materialized.
inline bool should_terminate(const Int& B, const HeightBudget& budget) {
    return log_mpz(B) >= budget.log_Hbound2;
}

// Smallest k with E0 * d^2 * (1/2)^(2^k - 1 - d) <= target accuracy,
// searched directly in log scale.
inline unsigned predicted_iterations_for_target(long d, const Rational& E0, double log_target) {
    if (d < 1 || E0 <= 0) throw ArithError("predicted_iterations: inputs must be positive");
    const double ln2 = std::log(2.0);
    double base = log_mpq(E0) + 2.0 * std::log(static_cast<double>(d));
    for (unsigned k = 0; k <= 64; ++k) {
        double twok = std::pow(2.0, static_cast<double>(k));
        if (base - (twok - 1.0 - static_cast<double>(d)) * ln2 <= log_target) return k;
    }
    return 64;
}

// Best case: accuracy 1/(2 H*^2) suffices to click on the exact RUR.
inline unsigned predicted_iterations(long d, const Rational& E0, const Int& H_star) {
    return predicted_iterations_for_target(d, E0, -std::log(2.0) - 2.0 * log_mpz(H_star));
}

// Worst case: accuracy 1/(2 e^(2 log_Hbound2)) before refuting.
inline unsigned predicted_iterations_worst(long d, const Rational& E0, const HeightBudget& budget) {
    return predicted_iterations_for_target(d, E0, -std::log(2.0) - 2.0 * budget.log_Hbound2);
}

// ---------------------------------------------------------------------------
// Minimal alpha-test for a square system

struct AlphaResult {
    bool certified = false;
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

inline constexpr double kAlphaThreshold = 0.15767078088535988;  // (13 - 3*sqrt(17))/4

// alpha(f, x) = beta * gamma with beta = ||Df(x)^-1 f(x)||_2 and gamma an
// upper bound on the standard higher-derivative supremum for polynomial
// systems.  The gamma bound over-estimates, so a positive answer is
// conservative.
inline AlphaResult alpha_test(const PolySystem& g, const CVector& x) {
    if (g.size() != g.nvars()) throw PolyError("alpha_test: system must be square");
    const unsigned prec = x.at(0).precision();
    const std::size_t n = g.size();
    CMatrix J = eval_jacobian(jacobian(g.polynomials), x);
    CVector gx;
    for (const auto& p : g.polynomials) gx.push_back(p.eval(x));
    CVector y = solve_linear(J, gx);
    AlphaResult res;
    res.beta = vec_norm2(y).to_double();

    std::vector<BigFloat> sv = singular_values(J);
    BigFloat smin = sv.back();
    if (smin.is_zero()) throw SingularJacobian("alpha_test: Jacobian numerically singular");
    double inv_norm = 1.0 / smin.to_double();

    // R = max(1, ||x||_inf)
    double R = 1.0;
    for (const auto& xi : x) {
        double a = xi.abs().to_double();
        if (a > R) R = a;
    }
    long D = g.max_degree();
    double gamma = 0.0;
    double sqrt_n = std::sqrt(static_cast<double>(n));
    for (long k = 2; k <= D; ++k) {
        // M_k: 2-norm over equations of the per-equation k-th derivative
        // tensor bound: sum over terms of |c| * t(t-1)...(t-k+1) * R^(t-k),
        // with an n^(k/2) factor covering direction vectors.
        double Mk_sq = 0.0;
        for (const auto& p : g.polynomials) {
            double s = 0.0;
            for (const auto& [e, c] : p.terms()) {
                long t = 0;
                for (unsigned ej : e) t += ej;
                if (t < k) continue;
                double fall = 1.0;
                for (long i = 0; i < k; ++i) fall *= static_cast<double>(t - i);
                s += std::abs(c.get_d()) * fall * std::pow(R, static_cast<double>(t - k)) *
                     std::pow(sqrt_n, static_cast<double>(k));
            }
            Mk_sq += s * s;
        }
        double kfact = 1.0;
        for (long i = 2; i <= k; ++i) kfact *= static_cast<double>(i);
        double cand = std::pow(inv_norm * std::sqrt(Mk_sq) / kfact,
                               1.0 / (static_cast<double>(k) - 1.0));
        if (cand > gamma) gamma = cand;
    }
    res.gamma = gamma;
    res.alpha = res.beta * res.gamma;
    res.certified = res.alpha < kAlphaThreshold;
    (void)prec;
    return res;
}

// Well-constrained basis from an exact RUR: variables (x_1..x_n, T),
// polynomials q(T) and x_i - v_i(T).
inline PolySystem rur_square_system(const ExactRur& rur, const std::vector<std::string>& vars) {
    const std::size_t n = rur.v.size();
    PolySystem g;
    g.variables = vars;
    g.variables.push_back("T");
    auto embed_uni = [n](const UniPoly<Rational>& p) {
        MultiPoly out(n + 1);
        for (long i = 0; i <= p.degree(); ++i) {
            Rational c = p.coeff(static_cast<std::size_t>(i));
            if (c == 0) continue;
            Exponents e(n + 1, 0);
            e[n] = static_cast<unsigned>(i);
            out.add_term(std::move(e), std::move(c));
        }
        return out;
    };
    g.polynomials.push_back(embed_uni(rur.q));
    for (std::size_t i = 0; i < n; ++i)
        g.polynomials.push_back(MultiPoly::variable(n + 1, i) - embed_uni(rur.v[i]));
    return g;
}

// ---------------------------------------------------------------------------
// Pipeline

struct PipelineOptions {
    std::uint64_t seed = 1;
    unsigned precision_bits = kDefaultPrecisionBits;
    unsigned max_iterations = 0;  // 0 = predicted worst case + 4, hard cap 64
    enum class Method { Local, Global } method = Method::Local;
    std::optional<Rational> residual_tolerance;
    std::vector<Rational> e_override;   // per-iteration E override
    std::vector<Int> b_schedule;        // per-iteration B override
    std::optional<std::vector<Rational>> lambda_override;
    bool normalize_primitive = false;
    unsigned primitive_trials = 200;
    std::optional<unsigned long> delta_override;
    InterpolationMode interp = InterpolationMode::Auto;
};

struct CertificateReport {
    enum class Outcome { Certified, RefutedByHeightBound, Inconclusive, NotAComponent };
    Outcome outcome = Outcome::Inconclusive;
    std::optional<ExactRur> certified_rur;
    unsigned iterations = 0;
    std::vector<Int> B_history;
    std::vector<Rational> E_history;
    std::optional<HeightValue> output_height;
    double seconds = 0.0;
    HeightBudget budget;
    // Audit trail
    std::vector<double> candidate_residuals;
    std::size_t selected_count = 0;
    std::vector<Rational> lambda;
    std::size_t witness_index = 0;
    std::vector<std::string> final_remainders;
    std::vector<std::string> rur_trace;
    std::vector<std::string> notes;
};

inline std::string rur_text(const ApproxRur& rur) {
    std::string s = "q = " + poly_text(rur.q);
    for (std::size_t i = 0; i < rur.v.size(); ++i)
        s += "; v" + std::to_string(i + 1) + " = " + poly_text(rur.v[i]);
    return s;
}

inline std::string rur_text(const ExactRur& rur) {
    std::string s = "q = " + poly_text(rur.q);
    for (std::size_t i = 0; i < rur.v.size(); ++i)
        s += "; v" + std::to_string(i + 1) + " = " + poly_text(rur.v[i]);
    return s;
}

inline HeightValue rur_output_height(const ExactRur& rur) {
    Int best = 1;
    auto scan = [&best](const UniPoly<Rational>& p) {
        if (p.is_zero()) return;
        HeightValue h = height_of_coeffs(p.coeffs());
        if (h.height > best) best = h.height;
    };
    scan(rur.q);
    for (const auto& vi : rur.v) scan(vi);
    return HeightValue{best, log_mpz(best)};
}

inline ApproxRootSet reembed_points(const ApproxRootSet& points, unsigned prec) {
    ApproxRootSet out;
    out.epsilon = points.epsilon;
    out.source = points.source;
    out.exact_points = points.exact_points;
    for (const auto& z : points.points) {
        CVector w;
        w.reserve(z.size());
        for (const auto& c : z)
            w.push_back(CFloat(BigFloat(c.re.to_rational(), prec), BigFloat(c.im.to_rational(), prec)));
        out.points.push_back(std::move(w));
    }
    return out;
}

// Orchestrates randomize -> select -> choose_primitive -> build -> loop
// { refine, bound, reconstruct, verify } until certified, refuted by the
// height bound, or the iteration cap.
inline CertificateReport certify_pipeline(const PolySystem& f, const ApproxRootSet& roots,
                                          const PipelineOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    CertificateReport rep;
    auto finish = [&](CertificateReport::Outcome o) {
        rep.outcome = o;
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    };

    const std::size_t n = f.nvars(), m = f.size();
    if (m < n) {
        rep.notes.push_back("underdetermined input: m < n");
        return finish(CertificateReport::Outcome::Inconclusive);
    }
    ApproxRootSet work = reembed_points(roots, opt.precision_bits);

    PolySystem F = m == n ? f : randomize(f, random_R(n, m, opt.seed));

    Rational tol = opt.residual_tolerance ? *opt.residual_tolerance
                                          : default_candidate_tolerance(f, work.epsilon);
    ApproxRootSet selected = select_candidates(work, f, tol, &rep.candidate_residuals);
    rep.selected_count = selected.size();
    if (selected.size() == 0) {
        rep.notes.push_back("no candidate roots passed the residual tolerance");
        return finish(CertificateReport::Outcome::Inconclusive);
    }

    unsigned long delta = opt.delta_override ? *opt.delta_override
                                             : static_cast<unsigned long>(roots.size());
    rep.budget = height_budget(f, delta);

    PrimitiveElement lambda;
    if (opt.lambda_override) {
        lambda.lambda = *opt.lambda_override;
        if (!separation_ok(lambda.lambda, selected)) {
            rep.notes.push_back("supplied primitive element fails the separation invariant");
            return finish(CertificateReport::Outcome::Inconclusive);
        }
    } else {
        lambda = choose_primitive(selected, opt.primitive_trials, opt.seed + 1,
                                  opt.normalize_primitive);
    }
    rep.lambda = lambda.lambda;

    const long d = static_cast<long>(selected.size());
    Rational E0 = local_error_bound(work.epsilon, d, 0);
    unsigned cap = opt.max_iterations
                       ? opt.max_iterations
                       : std::min(64u, predicted_iterations_worst(d, E0, rep.budget) + 4);

    bool use_global = opt.method == PipelineOptions::Method::Global && d >= 2;
    if (opt.method == PipelineOptions::Method::Global && d < 2)
        rep.notes.push_back("global method needs d >= 2; fell back to local iteration");

    std::optional<GlobalNewtonState<GaussRational>> gstate;
    std::optional<ExactRur> last_failed;
    unsigned precision = opt.precision_bits;

    for (unsigned k = 0; k <= cap; ++k) {
        rep.iterations = k;
        ApproxRur rur;
        ErrorEstimate est;
        if (!use_global || k == 0) {
            auto [r, e] = local_refine(F, selected, lambda, k, opt.interp);
            rur = std::move(r);
            est = e;
            if (use_global) {
                gstate.emplace(QuotientCtxT<GaussRational>(rur.q), rur.v, lambda.lambda);
            }
        } else {
            GlobalStepTrace tr;
            tr.k = k;
            *gstate = global_step(*gstate, F, &tr);
            rur.lambda = lambda;
            rur.q = gstate->ctx.modulus;
            rur.v = gstate->v;
            est.k = k;
            est.source = ErrorEstimate::Source::GlobalBound;
            est.E = global_error_bound(E0, k);
        }
        if (k < opt.e_override.size()) {
            est.E = opt.e_override[k];
            est.source = ErrorEstimate::Source::Override;
        }
        // Precision escalation when the imaginary residue dwarfs the bound.
        if (!use_global && rur.imag_residue() > est.E / 10) {
            precision *= 2;
            rep.notes.push_back("imaginary residue exceeded E/10; precision raised to " +
                                std::to_string(precision) + " bits");
            work = reembed_points(roots, precision);
            selected = select_candidates(work, f, tol, nullptr);
            auto [r, e] = local_refine(F, selected, lambda, k, opt.interp);
            rur = std::move(r);
            est.E = e.E;
        }

        Int B = k < opt.b_schedule.size() ? opt.b_schedule[k] : bound_B(est.E);
        rep.E_history.push_back(est.E);
        rep.B_history.push_back(B);
        rep.rur_trace.push_back("k=" + std::to_string(k) + ": " + rur_text(rur));

        std::optional<ExactRur> exact = reconstruct_rur(rur, B);
        if (exact) {
            VerifyResult vr = verify_rur(f, *exact);
            if (vr.ok) {
                rep.certified_rur = std::move(*exact);
                rep.output_height = rur_output_height(*rep.certified_rur);
                rep.final_remainders.clear();
                for (const auto& r : vr.remainders) rep.final_remainders.push_back(poly_text(r));
                return finish(CertificateReport::Outcome::Certified);
            }
            rep.witness_index = vr.witness_index;
            rep.final_remainders.clear();
            for (const auto& r : vr.remainders) rep.final_remainders.push_back(poly_text(r));
            if (last_failed && *last_failed == *exact) {
                rep.notes.push_back("reconstruction stabilized on a non-verifying RUR");
                return finish(CertificateReport::Outcome::NotAComponent);
            }
            last_failed = std::move(exact);
        }
        if (should_terminate(B, rep.budget)) {
            rep.notes.push_back("denominator bound exceeded the a priori height bound");
            return finish(CertificateReport::Outcome::RefutedByHeightBound);
        }
    }
    rep.notes.push_back("iteration cap reached");
    return finish(CertificateReport::Outcome::Inconclusive);
}

}  // namespace rurcert
