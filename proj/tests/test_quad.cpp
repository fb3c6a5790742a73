#include <cmath>

#include "doctest.h"
#include "lscat/quad.hpp"

using namespace lscat;

TEST_SUITE("quad") {

TEST_CASE("exponential on the half line") {
    IntegrandSpec s;
    s.evaluator = [](double x) { return Complex(std::exp(-x), 0.0); };
    s.decay = DecayClass::exponential(1.0);
    QuadOptions o;
    o.tol = 1e-12;
    CHECK(std::abs(integrate_halfline(s, o).value - 1.0) < 1e-10);
}

TEST_CASE("damped oscillation on the half line") {
    const double a = 0.5;
    IntegrandSpec s;
    s.evaluator = [a](double x) { return std::exp(Complex(-a, 1.0) * x); };
    s.envelope = [a](double x) { return std::exp(-a * x); };
    s.decay = DecayClass::exponential(a);
    QuadOptions o;
    o.tol = 1e-12;
    const Complex expected = 1.0 / Complex(a, -1.0);
    CHECK(std::abs(integrate_halfline(s, o).value - expected) < 1e-10);
}

TEST_CASE("inverse square-root endpoint via a branch point") {
    IntegrandSpec s;
    s.evaluator = [](double x) { return x < 1.0 ? Complex(1.0 / std::sqrt(1.0 - x * x), 0.0) : 0.0; };
    s.envelope = [](double x) { return x < 1.0 ? 1.0 / std::sqrt(1.0 - x * x) : 0.0; };
    s.breakpoints = {1.0};
    s.decay = DecayClass::algebraic(2.0);
    QuadOptions o;
    o.tol = 1e-12;
    CHECK(std::abs(integrate_halfline(s, o).value - pi / 2.0) < 1e-10);
}

TEST_CASE("finite interval") {
    const auto r = integrate_interval([](double x) { return Complex(std::cos(x), std::sin(x)); }, 0.0, 2.0);
    CHECK(std::abs(r.value - Complex(std::sin(2.0), 1.0 - std::cos(2.0))) < 1e-10);
}

TEST_CASE("halving the tolerance never increases the error estimate") {
    IntegrandSpec s;
    s.evaluator = [](double x) { return std::exp(Complex(-0.3, 2.0) * x) / (1.0 + x); };
    s.envelope = [](double x) { return std::exp(-0.3 * x); };
    s.decay = DecayClass::exponential(0.3);
    double prev = 1e300;
    for (double tol = 1e-4; tol > 1e-12; tol *= 0.5) {
        QuadOptions o;
        o.tol = tol;
        const auto r = integrate_halfline(s, o);
        CHECK(r.error <= prev);
        prev = r.error;
    }
}

TEST_CASE("results are deterministic") {
    IntegrandSpec s = fold_even_odd([](double x) { return Complex(std::exp(-x * x), 0.0); },
                                    Parity::even, 0.7, {}, DecayClass::exponential(1.0));
    const auto a = integrate_halfline(s), b = integrate_halfline(s);
    CHECK(a.value == b.value);
    CHECK(a.panels == b.panels);
    // 2 int_0^inf exp(-x^2) cos(0.7 x) = sqrt(pi) exp(-0.49 / 4)
    CHECK(std::abs(a.value - std::sqrt(pi) * std::exp(-0.1225)) < 1e-8);
}

TEST_CASE("odd fold with zero offset vanishes") {
    IntegrandSpec s = fold_even_odd([](double x) { return Complex(x * std::exp(-x), 0.0); },
                                    Parity::odd, 0.0, {}, DecayClass::exponential(1.0));
    CHECK(integrate_halfline(s).value == Complex(0.0, 0.0));
}

TEST_CASE("panel budget exhaustion is an accuracy error") {
    IntegrandSpec s;
    s.evaluator = [](double x) { return Complex(std::cos(50.0 * x) / (1.0 + x * x), 0.0); };
    s.envelope = [](double x) { return 1.0 / (1.0 + x * x); };
    s.decay = DecayClass::algebraic(2.0);
    QuadOptions o;
    o.tol = 1e-14;
    o.max_panels = 3;
    CHECK_THROWS_AS(integrate_halfline(s, o), AccuracyError);
}

}
