// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion is self-contained and timed against its budget.

#include <rurcert/certify.hpp>
#include <rurcert/deflate.hpp>
#include <rurcert/gnewton.hpp>
#include <rurcert/io.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace rurcert;

namespace {

constexpr unsigned kPrec = 212;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PolySystem load_system(const std::string& name) {
    return parse_system(slurp(std::string(RURCERT_DATA_DIR) + "/" + name));
}

ApproxRootSet load_roots(const std::string& name) {
    return parse_roots(slurp(std::string(RURCERT_DATA_DIR) + "/" + name), kPrec);
}

Rational Q(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

UniPoly<Rational> upoly(std::vector<Rational> c) { return UniPoly<Rational>(std::move(c)); }

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw Failure(msg);
}

// ---------------------------------------------------------------------------
// 1. Illustrative end-to-end

void criterion1() {
    auto f = load_system("illus.sys");
    auto roots = load_roots("illus_roots.json");
    require(roots.epsilon == Q(1, 500), "epsilon != 0.002");

    PrimitiveElement u;
    u.lambda = {Q(0), Q(1), Q(0)};  // u = x2

    // initial RUR in exact arithmetic
    auto initial = build_rur(roots, u, InterpolationMode::Direct);
    require(initial.imag_residue() == 0, "initial RUR has imaginary parts");
    auto real = [](const UniPoly<GaussRational>& p) {
        return p.map<Rational>([](const GaussRational& c) { return c.re; });
    };
    require(real(initial.q) == upoly({Q(-14641, 15625), Q(0), Q(1)}), "initial q mismatch");
    require(real(initial.v[0]) == upoly({Q(-1, 4)}), "initial v1 mismatch");
    require(real(initial.v[1]) == upoly({0, 1}), "initial v2 mismatch");
    require(real(initial.v[2]) == upoly({Q(-547, 250)}), "initial v3 mismatch");

    // pipeline with the documented B-schedule {2, 16}
    PipelineOptions opt;
    opt.seed = 1;
    opt.lambda_override = std::vector<Rational>{Q(0), Q(1), Q(0)};
    opt.b_schedule = {Int(2), Int(16)};
    auto rep = certify_pipeline(f, roots, opt);
    require(rep.outcome == CertificateReport::Outcome::Certified, "pipeline did not certify");
    require(rep.iterations == 1, "expected failure at k=0 and success at k=1");
    require(rep.B_history.size() == 2 && rep.B_history[0] == 2 && rep.B_history[1] == 16,
            "B history is not {2, 16}");

    ExactRur expect;
    expect.lambda = {Q(0), Q(1), Q(0)};
    expect.q = upoly({Q(-15, 16), Q(0), Q(1)});
    expect.v = {upoly({Q(-1, 4)}), upoly({0, 1}), upoly({Q(-35, 16)})};
    require(rep.certified_rur && *rep.certified_rur == expect, "certified RUR mismatch");

    // exact verification: every f_i(v(T)) is an exact constant multiple of q
    // (so all remainders vanish mod q), with f_4(v(T)) identically zero
    auto ver = verify_rur(f, expect);
    require(ver.ok, "verify_rur failed");
    for (const auto& r : ver.remainders) require(r.is_zero(), "non-zero remainder");
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto full = compose_full(f.polynomials[i], expect.v);
        if (i == 3) {
            require(full.is_zero(), "f4(v(T)) should vanish identically");
        } else {
            auto [quo, rem] = divrem(full, expect.q);
            require(rem.is_zero() && quo.degree() == 0, "f_i(v(T)) is not a multiple of q");
        }
    }
}

// ---------------------------------------------------------------------------
// 2. Cyclic-4 oracle loop

void criterion2() {
    auto f = load_system("cyclic4.sys");

    ExactRur expect;
    expect.lambda = {Q(1), Q(2), Q(-1), Q(3)};
    expect.q = upoly({-1, 1}) * upoly({1, 1}) * upoly({-3, 1}) * upoly({3, 1}) *
               upoly({1, 0, 1}) * upoly({9, 0, 1});
    UniPoly<Rational> v1 = Q(1, 120) * upoly({0, 121, 0, 0, 0, -1});
    UniPoly<Rational> v2 = Q(1, 60) * upoly({0, 61, 0, 0, 0, -1});
    expect.v = {v1, v2, -v1, -v2};

    // solve the printed q numerically to high accuracy
    auto qf = expect.q.map<CFloat>(
        [](const Rational& c) { return CFloat::from_rational(c, kPrec); });
    auto troots = poly_roots(qf, 120);
    require(troots.size() == 8, "expected 8 roots of q");

    // map through the printed parametrizations and perturb
    ApproxRootSet pts;
    pts.epsilon = Rational(1, Int("10000000000"));  // 1e-10
    CFloat delta(1e-12, -1e-12, kPrec);
    for (const auto& t : troots) {
        CVector z;
        for (const auto& vi : expect.v) {
            auto vif = vi.map<CFloat>(
                [](const Rational& c) { return CFloat::from_rational(c, kPrec); });
            z.push_back(vif.eval(t) + delta);
        }
        pts.points.push_back(std::move(z));
    }

    PipelineOptions opt;
    opt.seed = 2;
    opt.lambda_override = expect.lambda;
    auto rep = certify_pipeline(f, pts, opt);
    require(rep.outcome == CertificateReport::Outcome::Certified, "pipeline did not certify");
    require(rep.certified_rur && *rep.certified_rur == expect,
            "recovered RUR differs from the printed one");
}

// ---------------------------------------------------------------------------
// 3. Caprasse multiple roots

void criterion3() {
    auto g = load_system("caprasse.sys");
    auto roots = load_roots("caprasse_roots.json");
    require(roots.size() == 8, "expected 8 multiple points");
    double tol = roots.epsilon.get_d();

    for (const auto& z : roots.points) {
        require(dnull(g, z, tol) == 2, "dnull != 2 at a multiple point");
        auto minors = minors_reduced(g, z, 2);
        require(minors.size() == 4, "reduced minor count != 4");
    }

    auto f = load_system("caprasse_deflated.sys");
    PipelineOptions opt;
    opt.seed = 3;
    opt.lambda_override = std::vector<Rational>{Q(1), Q(-1), Q(3), Q(-3)};
    auto rep = certify_pipeline(f, roots, opt);
    require(rep.outcome == CertificateReport::Outcome::Certified, "pipeline did not certify");

    ExactRur expect;
    expect.lambda = {Q(1), Q(-1), Q(3), Q(-3)};
    expect.q = upoly({Q(4, 3), Q(0), Q(1)}) * upoly({12, 0, 1}) * upoly({76, -16, 1}) *
               upoly({76, 16, 1});
    auto vpoly = [](long c1, long c3, long c5, long c7, long den) {
        return Q(1, den) * upoly({0, Q(c1), 0, Q(c3), 0, Q(c5), 0, Q(c7)});
    };
    expect.v = {
        vpoly(-361834048, -15954064, 347060, -4107, 339935232),
        vpoly(-384342848, -32397008, 672196, -6999, 679870464),
        vpoly(181018688, 8058512, -169876, 1851, 169967616),
        vpoly(384342848, 32397008, -672196, 6999, 679870464),
    };
    require(rep.certified_rur && rep.certified_rur->q == expect.q, "q mismatch");
    require(rep.certified_rur->lambda == expect.lambda, "lambda mismatch");
    for (std::size_t i = 0; i < 4; ++i)
        require(rep.certified_rur->v[i] == expect.v[i], "v mismatch at index " + std::to_string(i));
}

// ---------------------------------------------------------------------------
// 4. Whitney umbrella

void criterion4() {
    auto g = load_system("whitney.sys");
    CVector origin = {CFloat::zero(kPrec), CFloat::zero(kPrec), CFloat::zero(kPrec)};

    auto reduced = deflation_sequence(g, origin, 16, DeflationMode::Reduced);
    require(reduced.sequence == std::vector<unsigned>{3, 2, 0}, "sequence != {3,2,0} (reduced)");
    auto full = deflation_sequence(g, origin, 16, DeflationMode::Full);
    require(full.sequence == std::vector<unsigned>{3, 2, 0}, "sequence != {3,2,0} (full)");

    require(reduced.iterations.size() == 2, "expected two deflation iterations");
    require(reduced.iterations[1].ell == 18, "iteration-2 full minor count != 18");
    require(reduced.iterations[1].c == 6, "iteration-2 reduced minor count != 6");

    // final Jacobian has full numeric column rank 3 (corank zero)
    require(dnull(reduced.final_system, origin) == 0, "final system not regular at origin");
}

// ---------------------------------------------------------------------------
// 5. Rational-reconstruction property suite

void criterion5() {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> bdist(1, 1000000);
    for (int it = 0; it < 10000; ++it) {
        long B = bdist(rng);
        std::uniform_int_distribution<long> ddist(1, B);
        long d = ddist(rng);
        std::uniform_int_distribution<long> zdist(-3 * B, 3 * B);
        long zl = zdist(rng);
        Int z(zl), dd(d), gg;
        mpz_gcd(gg.get_mpz_t(), z.get_mpz_t(), dd.get_mpz_t());
        z /= gg;
        dd /= gg;
        // perturb by a proper fraction of the 1/(2B^2) window
        std::uniform_int_distribution<long> pdist(-999, 999);
        Rational delta = Rational(pdist(rng), 1000) / Rational(2 * Int(B) * Int(B));
        Rational c = Rational(z, dd) + delta;
        c.canonicalize();
        auto r = rat_reconstruct(c, Int(B));
        require(r.has_value(), "round-trip reconstruction failed to produce a value");
        require(r->first == z && r->second == dd, "round-trip recovered a different fraction");
    }

    // brute-force uniqueness agreement for all B <= 100
    std::uniform_int_distribution<long> num(-3000, 3000);
    std::uniform_int_distribution<long> den(1, 3000);
    for (long B = 1; B <= 100; ++B) {
        for (int it = 0; it < 20; ++it) {
            Rational c(num(rng), den(rng));
            c.canonicalize();
            auto got = rat_reconstruct(c, Int(B));
            // oracle: scan every admissible denominator
            std::optional<std::pair<Int, Int>> want;
            Rational tol = Rational(1, 2 * Int(B) * Int(B));
            for (long dcand = 1; dcand <= B && !want; ++dcand) {
                Rational scaled = c * dcand;
                Int fl;
                mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num().get_mpz_t(),
                           scaled.get_den().get_mpz_t());
                for (Int cand = fl; cand <= fl + 1; ++cand) {
                    Rational approx(cand, dcand);
                    approx.canonicalize();
                    Rational diff = c - approx;
                    if (diff < 0) diff = Rational(-diff);
                    if (diff < tol && approx.get_den() <= B)
                        want = {{Int(approx.get_num()), Int(approx.get_den())}};
                }
            }
            require(got.has_value() == want.has_value(), "brute-force existence disagreement");
            if (got)
                require(got->first == want->first && got->second == want->second,
                        "brute-force value disagreement");
        }
    }
}

// ---------------------------------------------------------------------------
// 6. Global-Newton quadratic convergence

void criterion6() {
    auto f = load_system("illus.sys");
    PolySystem sq;  // square subsystem regular at the RUR (equations 0, 2, 3)
    sq.variables = f.variables;
    sq.polynomials = {f.polynomials[0], f.polynomials[2], f.polynomials[3]};

    GlobalNewtonState<Rational> exact(
        QuotientCtxT<Rational>(upoly({Q(-15, 16), Q(0), Q(1)})),
        {upoly({Q(-1, 4)}), upoly({0, 1}), upoly({Q(-35, 16)})},
        {Q(0), Q(1), Q(0)});

    // perturb every free coefficient by 1e-3; v2 stays T so the primitive
    // element precondition sum lambda_i v_i = T remains exact
    Rational h(1, 1000);
    GlobalNewtonState<Rational> state(
        QuotientCtxT<Rational>(upoly({Q(-15, 16) + h, h, Q(1)})),
        {upoly({Q(-1, 4) + h, h}), upoly({0, 1}), upoly({Q(-35, 16) - h, h})},
        {Q(0), Q(1), Q(0)});

    auto rur_error = [&](const GlobalNewtonState<Rational>& s) {
        double worst = 0.0;
        auto scan = [&worst](const UniPoly<Rational>& a, const UniPoly<Rational>& b) {
            long deg = std::max(a.degree(), b.degree());
            for (long i = 0; i <= deg; ++i) {
                Rational diff = a.coeff(static_cast<std::size_t>(i)) -
                                b.coeff(static_cast<std::size_t>(i));
                worst = std::max(worst, std::abs(diff.get_d()));
            }
        };
        scan(s.ctx.modulus, exact.ctx.modulus);
        for (std::size_t i = 0; i < s.v.size(); ++i) scan(s.v[i], exact.v[i]);
        return worst;
    };

    std::vector<double> errs = {rur_error(state)};
    for (int k = 0; k < 3; ++k) {
        state = global_step(state, sq);
        require(state.lambda_combination() == upoly({0, 1}),
                "sum lambda_i V_i != T after step " + std::to_string(k + 1));
        errs.push_back(rur_error(state));
    }
    require(errs.back() < 1e-10, "max coefficient error not below 1e-10 after 3 steps");

    // least-squares slope of log e_{k+1} vs log e_k
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        if (errs[i] <= 0 || errs[i + 1] <= 0) continue;
        double x = std::log(errs[i]), y = std::log(errs[i + 1]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    require(n >= 2, "not enough positive error samples for a slope");
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    require(slope >= 1.9, "log-log convergence slope below 1.9");
}

// ---------------------------------------------------------------------------
// 7. Algebraic identity suite

void criterion7() {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> numv(-9, 9);
    std::uniform_int_distribution<long> denv(1, 4);
    auto rand_poly = [&](long deg, bool monic) {
        std::vector<Rational> c(static_cast<std::size_t>(deg) + 1);
        for (auto& x : c) x = Q(numv(rng), denv(rng));
        if (monic)
            c.back() = Rational(1);
        else if (c.back() == 0)
            c.back() = Rational(1);
        return upoly(std::move(c));
    };
    std::uniform_int_distribution<long> degd(1, 6);

    // divrem identity: 3000 cases
    for (int it = 0; it < 3000; ++it) {
        auto q = rand_poly(degd(rng), true);
        auto a = rand_poly(degd(rng) + degd(rng), false);
        auto [quo, rem] = divrem(a, q);
        require(quo * q + rem == a, "divrem identity failed");
        require(rem.degree() < q.degree(), "remainder degree too large");
    }

    // modinv correctness: 2000 cases
    for (int it = 0; it < 2000; ++it) {
        auto q = rand_poly(degd(rng) + 1, true);
        QuotientCtxT<Rational> ctx(q);
        auto a = rand_poly(degd(rng), false);
        try {
            auto inv = modinv(a, ctx);
            require(ctx.mul(a, inv) == upoly({1}), "a * modinv(a) != 1");
        } catch (const NotInvertible&) {
            require(poly_gcd(q, a).degree() > 0 || ctx.reduce(a).is_zero(),
                    "NotInvertible raised for an invertible element");
        }
    }

    // compose_mod vs full expansion: 2000 cases with d*D <= 64
    std::uniform_int_distribution<long> coef(-4, 4);
    for (int it = 0; it < 2000; ++it) {
        long d = degd(rng) + 1;            // modulus degree 2..7
        long D = std::min<long>(3, 64 / d);// total degree cap
        auto q = rand_poly(d, true);
        QuotientCtxT<Rational> ctx(q);
        MultiPoly f2(2);
        for (unsigned e0 = 0; e0 <= static_cast<unsigned>(D); ++e0)
            for (unsigned e1 = 0; e0 + e1 <= static_cast<unsigned>(D); ++e1)
                f2.add_term({e0, e1}, Q(coef(rng)));
        std::vector<UniPoly<Rational>> v = {rand_poly(d - 1, false), rand_poly(d - 1, false)};
        require(compose_mod(f2, v, ctx) == ctx.reduce(compose_full(f2, v)),
                "compose_mod disagrees with the full expansion");
    }

    // squarefree_check vs gcd oracle: 3000 cases
    std::uniform_int_distribution<int> coin(0, 1);
    for (int it = 0; it < 3000; ++it) {
        auto p = rand_poly(degd(rng), true);
        if (coin(rng)) p = p * p;  // force a repeated factor half the time
        bool oracle = poly_gcd(p, p.derivative()).degree() == 0;
        require(squarefree_check(p) == oracle, "squarefree_check disagrees with the gcd oracle");
    }
}

// ---------------------------------------------------------------------------
// 8. Cyclic-9 at format level (declared: full end-to-end needs 162 externally
// computed homotopy roots, which are not reproducible here)

void criterion8() {
    auto f = load_system("cyclic9.sys");
    require(f.nvars() == 9, "cyclic-9 should have 9 variables");
    require(f.size() == 11, "cyclic-9 overdetermined system should have 11 polynomials");

    // the three degree-18 moduli for the double-point subsets
    std::vector<UniPoly<Rational>> q18 = {
        upoly({19, -11, 1}) * upoly({361, 209, 102, 11, 1}) *
            upoly({47045881, 0, 0, 4828736, 0, 0, 488757, 0, 0, 704, 0, 0, 1}),
        upoly({31, 13, 1}) * upoly({961, -403, 138, -13, 1}) *
            upoly({887503681, 0, 0, -29433508, 0, 0, 946353, 0, 0, -988, 0, 0, 1}),
        upoly({-11, 1, 1}) * upoly({121, 11, 12, -1, 1}) *
            upoly({1771561, 0, 0, 45254, 0, 0, 2487, 0, 0, -34, 0, 0, 1}),
    };
    for (const auto& q : q18) {
        require(q.degree() == 18, "degree-18 modulus has wrong degree");
        require(q.is_monic(), "degree-18 modulus not monic");
        require(squarefree_check(q), "degree-18 modulus not square-free");
    }

    // the degree-54 modulus for the regular points
    UniPoly<Rational> q54 =
        upoly({-101, 1, 1}) * upoly({10201, 101, 102, -1, 1}) *
        upoly({79, 19, 1}) * upoly({6241, -1501, 282, -19, 1}) *
        upoly({61, -17, 1}) * upoly({3721, 1037, 228, 17, 1}) *
        upoly({243087455521L, 0, 0, -1161599884L, 0, 0, 5057697, 0, 0, -2356, 0, 0, 1}) *
        upoly({1061520150601L, 0, 0, 313211504L, 0, 0, 1122717, 0, 0, -304, 0, 0, 1}) *
        upoly({51520374361L, 0, 0, 409019762L, 0, 0, 3020223, 0, 0, 1802, 0, 0, 1});
    require(q54.degree() == 54, "degree-54 modulus has wrong degree");
    require(q54.is_monic(), "degree-54 modulus not monic");
    require(squarefree_check(q54), "degree-54 modulus not square-free");

    // the three moduli are pairwise coprime and coprime to the regular-point
    // modulus, as expected for disjoint point groups
    for (std::size_t i = 0; i < q18.size(); ++i) {
        for (std::size_t j = i + 1; j < q18.size(); ++j)
            require(poly_gcd(q18[i], q18[j]).degree() == 0, "degree-18 moduli share a factor");
        require(poly_gcd(q18[i], q54).degree() == 0, "double-point modulus shares a factor");
    }

    // 3x18 partition from synthetic rank-profile keys
    std::vector<std::string> keys;
    for (int i = 0; i < 54; ++i) keys.push_back("rank-profile-" + std::to_string(i % 3));
    auto groups = group_indices_by_key(keys);
    require(groups.size() == 3, "expected 3 groups");
    for (const auto& g : groups) require(g.size() == 18, "expected groups of size 18");
}

struct Criterion {
    const char* label;
    double budget_seconds;
    std::function<void()> run;
};

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"1 illustrative end-to-end (initial RUR, B-schedule {2,16}, exact verify)", 1.0, criterion1},
        {"2 cyclic-4 oracle loop (printed RUR recovered exactly)", 5.0, criterion2},
        {"3 caprasse multiple points (dnull=2, 4 reduced minors, printed RUR)", 60.0, criterion3},
        {"4 whitney umbrella (sequence {3,2,0}, ell=18 vs c=6, final rank 3)", 1.0, criterion4},
        {"5 rational reconstruction properties (1e4 round-trips + brute force)", 30.0, criterion5},
        {"6 global Newton quadratic convergence (3 steps, slope >= 1.9)", 5.0, criterion6},
        {"7 algebraic identity suite (1e4 randomized cases)", 60.0, criterion7},
        {"8 cyclic-9 format level (declared: needs 162 external homotopy roots)", 60.0, criterion8},
    };

    int failures = 0;
    for (auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string err;
        try {
            c.run();
        } catch (const std::exception& e) {
            err = e.what();
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = err.empty() && secs < c.budget_seconds;
        if (!ok) ++failures;
        if (err.empty() && secs >= c.budget_seconds) err = "time budget exceeded";
        std::printf("%s criterion %s [%.2fs/%.0fs]%s%s\n", ok ? "PASS" : "FAIL", c.label, secs,
                    c.budget_seconds, err.empty() ? "" : " -- ", err.c_str());
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
