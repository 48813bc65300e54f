#include <catch2/catch_amalgamated.hpp>

#include <rurcert/rur.hpp>

#include "helpers.hpp"

using namespace rurcert;
using testutil::Q;
using testutil::upoly;

namespace {

constexpr unsigned kPrec = 212;

GaussRational gr(long num, long den = 1) { return GaussRational{Q(num, den), Q(0)}; }

}  // namespace

TEST_CASE("build_q multiplies out the linear factors") {
    auto q = build_q<GaussRational>({gr(1), gr(-1)});
    REQUIRE(q.degree() == 2);
    CHECK(q.coeff(0) == gr(-1));
    CHECK(q.coeff(1) == gr(0));
    CHECK(q.coeff(2) == gr(1));

    auto q3 = build_q<GaussRational>({gr(1), gr(2), gr(3)});
    // (T-1)(T-2)(T-3) = T^3 - 6T^2 + 11T - 6
    CHECK(q3.coeff(0) == gr(-6));
    CHECK(q3.coeff(1) == gr(11));
    CHECK(q3.coeff(2) == gr(-6));
    CHECK(q3.is_monic());

    CHECK_THROWS_AS(build_q<GaussRational>({gr(2), gr(2)}), PolyError);
}

TEST_CASE("direct Lagrange interpolation") {
    // values of p(T) = T^2 + 1/2 at nodes 0, 1, -1
    std::vector<GaussRational> mu = {gr(0), gr(1), gr(-1)};
    std::vector<GaussRational> vals = {gr(1, 2), gr(3, 2), gr(3, 2)};
    auto p = interpolate_direct(mu, vals);
    REQUIRE(p.degree() == 2);
    CHECK(p.coeff(0) == gr(1, 2));
    CHECK(p.coeff(1) == gr(0));
    CHECK(p.coeff(2) == gr(1));

    CHECK_THROWS_AS(interpolate_direct<GaussRational>({gr(1), gr(1)}, {gr(0), gr(0)}), PolyError);
    CHECK_THROWS_AS(interpolate_direct<GaussRational>({gr(1)}, {gr(0), gr(0)}), PolyError);
}

TEST_CASE("chebyshev interpolation matches direct interpolation by evaluation") {
    // nodes inside [-1, 1]
    std::vector<double> nodes = {-0.9, -0.3, 0.2, 0.7};
    CVector mu, vals;
    for (double t : nodes) {
        mu.push_back(CFloat(t, 0.0, kPrec));
        // p(T) = 2T^3 - T + 1/4
        vals.push_back(CFloat(2 * t * t * t - t + 0.25, 0.0, kPrec));
    }
    auto cheb = interpolate_chebyshev(mu, vals);
    auto dir = interpolate_direct(mu, vals);
    REQUIRE(cheb.degree() <= 3);
    BigFloat tol(1e-50, kPrec);
    for (double t : {-0.5, 0.0, 0.55}) {
        CFloat x(t, 0.0, kPrec);
        CHECK((cheb.eval(x) - dir.eval(x)).abs() < tol);
    }

    CVector bad = {CFloat(2.0, 0.0, kPrec), CFloat(0.0, 0.0, kPrec)};
    CHECK_THROWS_AS(interpolate_chebyshev(bad, {bad[0], bad[1]}), NodesOutOfRange);
}

TEST_CASE("initial RUR of the illustrative system") {
    auto roots = testutil::load_roots("illus_roots.json");
    REQUIRE(roots.size() == 2);
    PrimitiveElement u;
    u.lambda = {Q(0), Q(1), Q(0)};  // u = x2
    auto rur = build_rur(roots, u, InterpolationMode::Direct);
    REQUIRE(rur.degree() == 2);
    CHECK(rur.imag_residue() == 0);
    // exact dyadic images of the decimal inputs give exactly these rationals
    auto real = [](const UniPoly<GaussRational>& p) {
        return p.map<Rational>([](const GaussRational& c) { return c.re; });
    };
    CHECK(real(rur.q) == upoly({Q(-14641, 15625), Q(0), Q(1)}));
    REQUIRE(rur.v.size() == 3);
    CHECK(real(rur.v[0]) == upoly({Q(-1, 4)}));
    CHECK(real(rur.v[1]) == upoly({Q(0), Q(1)}));
    CHECK(real(rur.v[2]) == upoly({Q(-547, 250)}));
}

TEST_CASE("local error bound follows the quadratic convergence schedule") {
    // E = eps d^2 (1/2)^(2^k - 1 - d), d = 2, eps = 1/500
    CHECK(local_error_bound(Q(1, 500), 2, 0) == Q(4, 125));   // exponent -2 -> *4
    CHECK(local_error_bound(Q(1, 500), 2, 1) == Q(2, 125));   // exponent -1 -> *2
    CHECK(local_error_bound(Q(1, 500), 2, 2) == Q(1, 250));   // exponent 1
    CHECK(local_error_bound(Q(1, 500), 2, 3) == Q(1, 4000));  // exponent 5
    // B at k=1 for the illustrative run: ceil((2 * 2/125)^(-1/2)) -> 6
    CHECK(bound_B(local_error_bound(Q(1, 500), 2, 1)) == 6);
}

TEST_CASE("local refinement shrinks residuals of the illustrative square system") {
    auto f = testutil::load_system("illus.sys");
    auto roots = testutil::load_roots("illus_roots.json");
    // square subsystem with a nonsingular Jacobian at the roots (the system
    // has 4 polynomials in 3 variables; equations 0, 2, 3 suffice)
    PolySystem sq;
    sq.variables = f.variables;
    sq.polynomials = {f.polynomials[0], f.polynomials[2], f.polynomials[3]};
    PrimitiveElement u;
    u.lambda = {Q(0), Q(1), Q(0)};
    auto [rur0, est0] = local_refine(sq, roots, u, 0, InterpolationMode::Direct);
    auto [rur2, est2] = local_refine(sq, roots, u, 2, InterpolationMode::Direct);
    CHECK(est0.E == Q(4, 125));
    CHECK(est2.E == Q(1, 250));
    // after refinement mu is closer to the true value -15/16 coefficient
    Rational c0 = rur0.q.coeff(0).re + Q(15, 16);
    Rational c2 = rur2.q.coeff(0).re + Q(15, 16);
    if (c0 < 0) c0 = -c0;
    if (c2 < 0) c2 = -c2;
    CHECK(c2 < c0);
    CHECK(c2 < Q(1, 1000000));
}
