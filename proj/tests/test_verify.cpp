#include <cmath>

#include "doctest.h"
#include "lscat/layered_green.hpp"
#include "lscat/specfun.hpp"
#include "lscat/verify.hpp"

using namespace lscat;

TEST_SUITE("verify") {

TEST_CASE("Mie series against scipy references") {
    // scipy.special separated-variable sums, a = 0.5, kappa = 2, source (2, 0), x (0, 1.5)
    MieProblem p;
    p.radius = 0.5;
    p.kappa = 2.0;
    p.source = Point(2.0, 0.0);
    p.index = Complex(1.5, 0.1);
    const Point x(0.0, 1.5);
    p.kind = MieKind::sound_soft;
    CHECK(std::abs(mie_scattered(p, x) - Complex(-0.04641668602535732, -0.024036275059683896)) < 1e-12);
    p.kind = MieKind::neumann;
    CHECK(std::abs(mie_scattered(p, x) - Complex(0.011597484528524472, -0.01946086678021524)) < 1e-12);
    p.kind = MieKind::penetrable;
    CHECK(std::abs(mie_scattered(p, x) - Complex(-0.012002183276070793, 0.005594648847597086)) < 1e-12);
}

TEST_CASE("sound-soft series cancels the incident trace") {
    MieProblem p;
    p.radius = 0.5;
    p.kappa = 2.0;
    p.source = Point(1.2, 0.7);
    for (int k = 0; k < 12; ++k) {
        const Point x = 0.5 * Point(std::cos(0.5 * k), std::sin(0.5 * k));
        CHECK(std::abs(mie_scattered(p, x) + fundamental_solution(2.0, x, p.source)) < 1e-10);
    }
}

TEST_CASE("Mie series is reciprocal in source and receiver") {
    MieProblem p;
    p.kind = MieKind::penetrable;
    p.index = Complex(1.5, 0.1);
    p.kappa = 1.3;
    p.source = Point(1.0, 2.0);
    const Point x(-1.5, 0.4);
    const Complex a = mie_scattered(p, x);
    p.source = x;
    CHECK(std::abs(mie_scattered(p, Point(1.0, 2.0)) - a) < 1e-12);
}

TEST_CASE("Mie series failures") {
    MieProblem p;
    p.max_order = 1;
    p.kappa = 5.0;
    CHECK_THROWS_AS(mie_scattered(p, Point(1.0, 0.0)), AccuracyError);
    CHECK_THROWS_AS(mie_scattered(MieProblem{}, Point(0.1, 0.0)), DomainError);
}

TEST_CASE("complex Bessel series matches the real one") {
    for (int m : {0, 1, 4})
        CHECK(std::abs(bessel_j_complex(m, Complex(2.5, 0.0)) - std::cyl_bessel_j(m, 2.5)) < 1e-14);
    CHECK(std::abs(bessel_j_complex(-3, 1.0) + std::cyl_bessel_j(3, 1.0)) < 1e-15);
}

TEST_CASE("stencil residuals") {
    const double kappa = 2.0, h = 1e-2;
    const Field phi = [&](const Point& x) { return fundamental_solution(kappa, x, Point::Zero()); };
    const StencilProbe probe{Point(2.0, 0.0), h, kappa};
    CHECK(std::abs(helmholtz_residual(phi, probe)) <= 1e-2 * std::abs(phi(probe.center)));
    const double ratio = stencil_ratio(phi, probe.center, h, kappa);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);

    const Field wave = [&](const Point& x) { return std::exp(I * kappa * x(0)); };
    const double model = std::abs(kappa * kappa - (2.0 - 2.0 * std::cos(kappa * h)) / (h * h));
    CHECK(std::abs(helmholtz_residual(wave, probe)) == doctest::Approx(model).epsilon(1e-6));

    const Field zero = [](const Point&) { return Complex(0.0, 0.0); };
    CHECK(helmholtz_residual(zero, probe) == Complex(0.0, 0.0));
}

TEST_CASE("radiation probe separates outgoing from incoming waves") {
    const double kappa = 2.0;
    const Field out = [&](const Point& x) { return fundamental_solution(kappa, x, Point::Zero()); };
    const Field in = [&](const Point& x) { return std::conj(out(x)); };
    const Field zero = [](const Point&) { return Complex(0.0, 0.0); };
    const std::vector<double> radii{10.0, 20.0, 40.0, 80.0};
    const auto a = radiation_probe(out, Point::Zero(), Point(1.0, 1.0), radii, kappa);
    const auto b = radiation_probe(in, Point::Zero(), Point(1.0, 1.0), radii, kappa);
    const auto z = radiation_probe(zero, Point::Zero(), Point(1.0, 0.0), radii, kappa);
    for (std::size_t k = 1; k < radii.size(); ++k) {
        CHECK(a[k] < a[k - 1]);
        CHECK(b[k] > 0.5 * b[0]);
        CHECK(z[k] == 0.0);
    }
}

TEST_CASE("verification suite passes and the branch flip is caught") {
    for (const auto& c : run_verification()) {
        INFO(c.check);
        CHECK(c.pass);
    }
    debug::set_branch_flip(true);
    const auto flipped = run_verification();
    debug::set_branch_flip(false);
    bool beta_failed = false;
    for (const auto& c : flipped)
        if (c.check == "beta_branch") beta_failed = !c.pass;
    CHECK(beta_failed);
}

}
