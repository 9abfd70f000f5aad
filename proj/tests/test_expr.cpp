#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "testutil.hpp"
#include "warpcheck/expr.hpp"

using namespace warpcheck;

namespace {
const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kT{"t"};

double eval1(const std::string& src, double t) {
    return parse(src, kT).value(std::vector<double>{t});
}
} // namespace

TEST_CASE("printing round-trips to a structurally equal expression") {
    const char* cases[] = {
        "x+y*x",          "(x+y)/(x-y)",  "sin(x)*cos(y)^2", "-x^2",
        "x^1/2",          "2/3*x",        "-(x+1)",          "x-y-x",
        "x/y/x",          "x^-2",         "1.5e-3*x",        "tanh(x)+sqrt(y+2)",
        "exp(x)-log(y+3)", "x*(y+1)*(y-1)", "-(-x)",          "x^0",
    };
    for (const char* src : cases) {
        CAPTURE(src);
        const Expression e = parse(src, kXY);
        const Expression again = parse(e.str(), kXY);
        CHECK(structurally_equal(e, again));
        CHECK(again.str() == e.str());
    }
}

TEST_CASE("grammar quirks evaluate as the grammar says") {
    // '-' binds tighter than '^': -x^2 is (-x)^2
    CHECK(eval1("-t^2", 3.0) == doctest::Approx(9.0));
    // exponents are rationals: t^1/2 is sqrt(t), not (t^1)/2
    CHECK(eval1("t^1/2", 4.0) == doctest::Approx(2.0));
    CHECK(eval1("t^-2", 2.0) == doctest::Approx(0.25));
    CHECK(eval1("t^2/4", 16.0) == doctest::Approx(4.0)); // 16^(2/4) = 16^(1/2)
    // left associativity
    CHECK(eval1("2-3-4", 0.0) == doctest::Approx(-5.0));
    CHECK(eval1("2/4/2", 0.0) == doctest::Approx(0.25));
    // unary minus folds into literals and round-trips
    const Expression neg = parse("-2.5", kT);
    CHECK(neg.value(std::vector<double>{0.0}) == -2.5);
    CHECK(structurally_equal(neg, parse(neg.str(), kT)));
}

TEST_CASE("parse errors carry byte offsets") {
    auto offset_of = [](const std::string& src) {
        try {
            parse(src, kT);
        } catch (const ParseError& e) {
            return e.offset();
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(offset_of("sin(t") == 5);     // missing ')'
    CHECK(offset_of("t$") == 1);        // unexpected character
    CHECK_THROWS_AS(parse("", kT), ParseError);
    CHECK_THROWS_AS(parse("t +", kT), ParseError);
    CHECK_THROWS_AS(parse("(t", kT), ParseError);
    CHECK_THROWS_AS(parse("t^", kT), ParseError);
    CHECK_THROWS_AS(parse("t^1/", kT), ParseError);   // missing denominator
    CHECK_THROWS_AS(parse("t^x", kT), ParseError);    // exponent must be rational
    CHECK_THROWS_AS(parse("t^1.5", kT), ParseError);  // exponent must be rational
    CHECK_THROWS_AS(parse("sin", kT), ParseError);    // function without arguments
    CHECK_THROWS_AS(parse("frob(t)", kT), ParseError); // unknown function
    CHECK_THROWS_AS(parse("t 2", kT), ParseError);    // trailing input
    CHECK_THROWS_AS(parse("t++2", kT), ParseError);
    CHECK_THROWS_AS(parse("1..5", kT), ParseError);
}

TEST_CASE("evaluation domain errors carry the offending subexpression") {
    const std::vector<double> zero{0.0};
    try {
        parse("1/t", kT).value(zero);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(e.subexpression() == "1/t");
        CHECK(std::string(e.what()).find("division by zero") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("log(t)", kT).value(zero), EvalError);
    CHECK_THROWS_AS(parse("sqrt(t-1)", kT).value(zero), EvalError);
    CHECK_THROWS_AS(parse("t^-1", kT).value(zero), EvalError);
    CHECK_THROWS_AS(parse("t^1/2", kT).value(std::vector<double>{-1.0}), EvalError);
    // sqrt(0): the value exists but the derivative does not
    CHECK(parse("sqrt(t)", kT).value(zero) == 0.0);
    CHECK_THROWS_AS(parse("sqrt(t)", kT).jet2(zero), EvalError);
}

TEST_CASE("symbols bind to constants; unbound symbols are reported") {
    const Expression e = parse("a*t+c", kT);
    CHECK(e.unbound_symbols() == std::vector<std::string>{"a", "c"});
    CHECK_THROWS_AS(e.value(std::vector<double>{1.0}), EvalError);

    const Expression bound = e.bind({{"a", 2.0}, {"c", -1.0}});
    CHECK(bound.unbound_symbols().empty());
    CHECK(bound.value(std::vector<double>{3.0}) == doctest::Approx(5.0));

    const Expression partial = e.bind({{"a", 2.0}});
    CHECK(partial.unbound_symbols() == std::vector<std::string>{"c"});
}

TEST_CASE("points must match the coordinate list") {
    const Expression e = parse("x+y", kXY);
    CHECK_THROWS_AS(e.value(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(e.jet2(std::vector<double>{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("remap_coords embeds an expression into a larger chart") {
    const Expression e = parse("x*y", kXY);
    const std::vector<std::string> big{"t", "x", "y"};
    const Expression r = e.remap_coords(big, 1);
    CHECK(r.value(std::vector<double>{9.0, 3.0, 5.0}) == doctest::Approx(15.0));
    // names must line up at the shifted indices
    CHECK_THROWS_AS(e.remap_coords({"t", "u", "v"}, 1), GeometryError);
}

TEST_CASE("multiply composes expressions without reparsing") {
    const Expression a = parse("x+1", kXY);
    const Expression b = parse("y-1", kXY);
    const Expression ab = multiply(a, b);
    CHECK(ab.value(std::vector<double>{2.0, 5.0}) == doctest::Approx(12.0));
    CHECK_THROWS_AS(multiply(a, parse("t", kT)), std::invalid_argument);
}

TEST_CASE("100 seeded random expressions match finite differences") {
    std::mt19937_64 rng(0xC05405ULL);
    int checked = 0;
    double worst = 0.0;
    std::string worst_src;
    while (checked < 100) {
        const std::string src = testutil::random_expression(rng);
        const Expression e = parse(src, kXY);
        auto draw = [&rng] { return -1.2 + 2.4 * (static_cast<double>(rng() >> 11) * 0x1.0p-53); };
        const std::vector<double> p{draw(), draw()};
        const testutil::FdCheck r = testutil::fd_matches(e, p, 1e-6);
        CAPTURE(src);
        CAPTURE(r.quantity);
        CHECK(r.ok);
        if (r.worst > worst) {
            worst = r.worst;
            worst_src = src;
        }
        ++checked;
    }
    CAPTURE(worst_src);
    CHECK(worst <= 1e-6);
}
