#include <catch2/catch_amalgamated.hpp>

#include <rurcert/io.hpp>

#include "helpers.hpp"

using namespace rurcert;
using testutil::Q;

TEST_CASE("system grammar accepts the documented forms") {
    auto sys = parse_system("vars: x\nx - 1/2\n");
    REQUIRE(sys.nvars() == 1);
    REQUIRE(sys.size() == 1);
    CHECK(sys.polynomials[0].eval<Rational>({Q(1, 2)}) == 0);

    sys = parse_system("vars: x y\n# comment line\n-x^2*y + 3*y - 7\n");
    CHECK(sys.polynomials[0].eval<Rational>({Q(2), Q(1)}) == Q(-4 + 3 - 7));

    // unary minus and parentheses
    sys = parse_system("vars: x\n-(x - 2)*(x + 2)\n");
    CHECK(sys.polynomials[0].eval<Rational>({Q(3)}) == Q(-5));

    // exponents bind tighter than products
    sys = parse_system("vars: x y\n2*x^3*y^2\n");
    CHECK(sys.polynomials[0].eval<Rational>({Q(2), Q(3)}) == Q(2 * 8 * 9));
}

TEST_CASE("parse errors carry line and column positions") {
    try {
        parse_system("vars: x\nx + * 2\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 5);
    }
    CHECK_THROWS_AS(parse_system("vars: x\nx + z\n"), ParseError);         // unknown variable
    CHECK_THROWS_AS(parse_system("vars: x x\nx\n"), ParseError);           // duplicate variable
    CHECK_THROWS_AS(parse_system("x + 1\n"), ParseError);                  // missing header
    CHECK_THROWS_AS(parse_system("vars: x\n"), ParseError);                // no polynomials
    CHECK_THROWS_AS(parse_system(""), ParseError);                         // empty file
    CHECK_THROWS_AS(parse_system("vars: x\nx^-1\n"), ParseError);          // negative exponent
    CHECK_THROWS_AS(parse_system("vars: x\n1/0\n"), ParseError);           // zero denominator
    CHECK_THROWS_AS(parse_system("vars: x\nx x\n"), ParseError);           // missing '*'
}

TEST_CASE("printing and reparsing is the identity on the corpus") {
    for (const char* name : {"illus.sys", "whitney.sys", "caprasse.sys", "cyclic4.sys",
                             "cyclic9.sys", "caprasse_deflated.sys", "cyclic4_deflated.sys"}) {
        auto sys = testutil::load_system(name);
        auto round = parse_system(print_system(sys));
        REQUIRE(round.variables == sys.variables);
        REQUIRE(round.size() == sys.size());
        for (std::size_t i = 0; i < sys.size(); ++i) CHECK(round.polynomials[i] == sys.polynomials[i]);
    }
}

TEST_CASE("root documents parse to exact dyadic images") {
    auto roots = testutil::load_roots("illus_roots.json");
    CHECK(roots.epsilon == Q(1, 500));
    REQUIRE(roots.size() == 2);
    REQUIRE(roots.points[0].size() == 3);
    // -0.25 is dyadic, so even the float image is exact
    CHECK(roots.points[0][0].re.to_rational() == Q(-1, 4));
    CHECK(roots.points[0][0].im.is_zero());
    // the exact channel keeps the non-dyadic decimals as true rationals
    REQUIRE(roots.has_exact());
    CHECK(roots.exact_points[0][1] == GaussRational{Q(121, 125), Q(0)});
    CHECK(roots.exact_points[0][2] == GaussRational{Q(-547, 250), Q(0)});
    // the float image agrees to working precision
    Rational err = roots.points[0][1].re.to_rational() - Q(121, 125);
    if (err < 0) err = Rational(-err);
    CHECK(err < Rational(Int(1), Int(1) << 200));
}

TEST_CASE("malformed root documents are rejected") {
    CHECK_THROWS(parse_roots("not json"));
    CHECK_THROWS(parse_roots("{}"));
    CHECK_THROWS(parse_roots(R"({"epsilon":"0","points":[[["1","0"]]]})"));
    CHECK_THROWS(parse_roots(R"({"epsilon":"0.1","points":[]})"));
    CHECK_THROWS(parse_roots(R"({"epsilon":"0.1","points":[[["1","0"]],[["1","0"],["2","0"]]]})"));
    CHECK_THROWS(parse_roots(R"({"epsilon":"0.1","points":[[["1"]]]})"));
}

TEST_CASE("rur json round-trips through rational strings") {
    ExactRur r;
    r.lambda = {Q(0), Q(1), Q(0)};
    r.q = testutil::upoly({Q(-15, 16), Q(0), Q(1)});
    r.v = {testutil::upoly({Q(-1, 4)}), testutil::upoly({0, 1}), testutil::upoly({Q(-35, 16)})};
    auto j = rur_json(r);
    CHECK(j.at("q").size() == 3);
    CHECK(j.at("q")[0].get<std::string>() == "-15/16");
    CHECK(j.at("lambda")[1].get<std::string>() == "1");
    CHECK(j.at("q_text").get<std::string>() == "T^2 - 15/16");
    REQUIRE(j.at("v").size() == 3);
    CHECK(j.at("v")[0][0].get<std::string>() == "-1/4");
}
