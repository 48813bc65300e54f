#include <catch2/catch_amalgamated.hpp>

#include <rurcert/arith.hpp>

#include <optional>
#include <random>

using namespace rurcert;

TEST_CASE("decimal strings parse to exact rationals") {
    CHECK(rational_from_decimal("0.002") == Rational(1, 500));
    CHECK(rational_from_decimal("-2.188") == Rational(-547, 250));
    CHECK(rational_from_decimal("-0.250") == Rational(-1, 4));
    CHECK(rational_from_decimal("0.968") == Rational(121, 125));
    CHECK(rational_from_decimal("1.5e-3") == Rational(3, 2000));
    CHECK(rational_from_decimal("12e2") == Rational(1200));
    CHECK(rational_from_decimal("+.5") == Rational(1, 2));
    CHECK(rational_from_decimal("0") == 0);
    CHECK_THROWS_AS(rational_from_decimal(""), ArithError);
    CHECK_THROWS_AS(rational_from_decimal("1.2.3"), ArithError);
    CHECK_THROWS_AS(rational_from_decimal("1e"), ArithError);
    CHECK_THROWS_AS(rational_from_decimal("abc"), ArithError);
}

TEST_CASE("integer strings with leading zeros parse as base 10") {
    CHECK(int_from_string("0968") == 968);
    CHECK(int_from_string("-007") == -7);
    CHECK_THROWS_AS(int_from_string("12x"), ArithError);
}

TEST_CASE("big float round-trips through exact rationals") {
    BigFloat x(Rational(-547, 250), 212);
    Rational r = x.to_rational();
    // -547/250 is not dyadic, but the stored float is, and converting the
    // float back must be lossless.
    CHECK(BigFloat(r, 212) == x);
    CHECK(BigFloat(Rational(3, 4), 64).to_rational() == Rational(3, 4));
    CHECK(BigFloat(0.0, 64).to_rational() == 0);
}

TEST_CASE("mixed-precision float arithmetic promotes") {
    BigFloat a(Rational(1, 4), 64), b(Rational(1, 8), 212);
    BigFloat s = a + b;
    CHECK(s.precision() == 212);
    CHECK(s.to_rational() == Rational(3, 8));
}

TEST_CASE("bound_B is the least B with 2 E B^2 >= 1") {
    CHECK(bound_B(Rational(1, 512)) == 16);
    CHECK(bound_B(Rational(1, 8)) == 2);
    CHECK(bound_B(Rational(4, 125)) == 4);   // (2E)^-1/2 = 3.95...
    CHECK(bound_B(Rational(1, 2)) == 1);
    for (long d = 1; d <= 2000; d += 7) {
        Rational E(1, d);
        Int B = bound_B(E);
        CHECK(2 * E * Rational(B * B) >= 1);
        if (B > 1) CHECK(2 * E * Rational((B - 1) * (B - 1)) < 1);
    }
}

TEST_CASE("rational reconstruction on crafted inputs") {
    // 0.3331 with B = 10 rounds to 1/3.
    auto r = rat_reconstruct(Rational(3331, 10000), 10);
    REQUIRE(r);
    CHECK(r->first == 1);
    CHECK(r->second == 3);
    // No fraction with denominator <= 3 lies within 1/18 of 0.4.
    CHECK_FALSE(rat_reconstruct(Rational(2, 5) + Rational(1, 100), 3));
    // Negative values work.
    r = rat_reconstruct(Rational(-2501, 10000), 16);
    REQUIRE(r);
    CHECK(r->first == -1);
    CHECK(r->second == 4);
    // An exact fraction reconstructs to itself in lowest terms.
    r = rat_reconstruct(Rational(35, 16), 16);
    REQUIRE(r);
    CHECK(r->first == 35);
    CHECK(r->second == 16);
}

namespace {

// Brute-force oracle: the fraction z/d, d <= B, with |c - z/d| < 1/(2B^2),
// if one exists (by uniqueness there is at most one).
std::optional<std::pair<Int, Int>> brute_reconstruct(const Rational& c, long B) {
    Rational tol = Rational(1, 2 * B * B);
    for (long d = 1; d <= B; ++d) {
        Rational scaled = c * d;
        Int z;
        mpz_fdiv_q(z.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
        for (Int cand = z; cand <= z + 1; ++cand) {
            Rational approx(cand, d);
            approx.canonicalize();
            if (abs(c - approx) < tol) {
                if (approx.get_den() <= B) return {{approx.get_num(), approx.get_den()}};
                return std::nullopt;  // reduced denominator escaped the bound
            }
        }
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("rational reconstruction agrees with brute force for small bounds") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-5000, 5000);
    std::uniform_int_distribution<long> den(1, 5000);
    std::uniform_int_distribution<long> bdist(1, 100);
    for (int it = 0; it < 2000; ++it) {
        Rational c(num(rng), den(rng));
        c.canonicalize();
        long B = bdist(rng);
        auto got = rat_reconstruct(c, B);
        auto want = brute_reconstruct(c, B);
        REQUIRE(got.has_value() == want.has_value());
        if (got) {
            CHECK(got->first == want->first);
            CHECK(got->second == want->second);
        }
    }
}

TEST_CASE("rational reconstruction round-trips under the admissible perturbation") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> bdist(2, 1000000);
    for (int it = 0; it < 1000; ++it) {
        long B = bdist(rng);
        std::uniform_int_distribution<long> ddist(1, B);
        long d = ddist(rng);
        std::uniform_int_distribution<long> zdist(-3 * B, 3 * B);
        Int z = zdist(rng);
        Int g;
        mpz_gcd(g.get_mpz_t(), z.get_mpz_t(), Int(d).get_mpz_t());
        z /= g;
        d = mpz_get_si(Int(Int(d) / g).get_mpz_t());
        // perturb by a random fraction of the allowed 1/(2B^2) window
        std::uniform_int_distribution<long> pdist(-1000, 1000);
        Rational delta = Rational(pdist(rng), 2001) * Rational(1, 2) / Rational(Int(B) * B);
        Rational c = Rational(z, d) + delta;
        c.canonicalize();
        auto r = rat_reconstruct(c, B);
        REQUIRE(r);
        CHECK(r->first == z);
        CHECK(r->second == d);
    }
}

TEST_CASE("height of a coefficient vector") {
    // {1, -15/16}: cleared to {16, -15}, gcd 1, height 16.
    auto h = height_of_coeffs({Rational(1), Rational(-15, 16)});
    CHECK(h.height == 16);
    // common factor is divided out
    h = height_of_coeffs({Rational(6), Rational(10)});
    CHECK(h.height == 5);
    h = height_of_coeffs({Rational(1, 2), Rational(1, 3)});
    CHECK(h.height == 3);
    CHECK(h.log_height == Catch::Approx(std::log(3.0)));
}
