#include <cmath>

#include "doctest.h"
#include "lscat/obstacle.hpp"
#include "lscat/specfun.hpp"
#include "lscat/verify.hpp"

using namespace lscat;

namespace {

// kappa1 = kappa2 = 2, flat interface: the layered kernel is Phi_2
const NestedGreen& free_green() {
    static const NestedGreen g([] {
        SceneGeometry s;
        s.arc.R = 0.5;
        return s;
    }(), Medium{2.0, 2.0}, MeshOptions{0.05, 4}, QuadOptions{});
    return g;
}

ObstacleSpec circle_spec(BoundaryKind kind) {
    ObstacleSpec s;
    s.kind = kind;
    s.curve.center = Point(0.0, -1.2);
    s.curve.size = 0.5;
    s.M = 32;
    s.index = Complex(1.5, 0.1);
    return s;
}

MatrixXc point_source(const std::vector<Point>& at, const Point& src) {
    MatrixXc v(static_cast<Eigen::Index>(at.size()), 1);
    for (std::size_t k = 0; k < at.size(); ++k) v(static_cast<Eigen::Index>(k), 0) = fundamental_solution(2.0, at[k], src);
    return v;
}

std::vector<Point> ring(const Point& c, int n) {
    std::vector<Point> xs;
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * pi * k / n + 0.1;
        xs.push_back(c + (0.8 + 0.05 * k) * Point(std::cos(t), std::sin(t)));
    }
    return xs;
}

double mie_error(BoundaryKind kind, MieKind mie) {
    const NestedGreen& g = free_green();
    const ObstacleSpec spec = circle_spec(kind);
    const ObstacleSolver ob(g, spec);
    const Point src(0.0, 0.8);
    const MatrixXc psi = ob.solve(point_source(ob.probe_points(), src));
    const auto xs = ring(spec.curve.center, 8);
    const VectorXc w = ob.potential(xs, g.correction_rows(xs)) * psi;
    MieProblem p;
    p.kind = mie;
    p.center = spec.curve.center;
    p.radius = 0.5;
    p.kappa = 2.0;
    p.index = spec.index;
    p.source = src;
    double err = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k)
        err = std::max(err, std::abs(w(static_cast<Eigen::Index>(k)) - mie_scattered(p, xs[k])));
    return err;
}

}  // namespace

TEST_SUITE("obstacle") {

TEST_CASE("Kress weights integrate log(4 sin^2) against trigonometric data") {
    const int M = 16;
    for (double t : {0.0, 0.37, 2.0}) {
        const Eigen::VectorXd r = kress_weights(M, t);
        CHECK(std::abs(r.sum()) < 1e-13);
        double s = 0.0;
        for (int j = 0; j < 2 * M; ++j) s += r(j) * std::cos(3.0 * j * pi / M);
        CHECK(std::abs(s + 2.0 * pi / 3.0 * std::cos(3.0 * t)) < 1e-13);
    }
}

TEST_CASE("trigonometric interpolation reproduces low modes") {
    const int M = 8;
    VectorXc v(2 * M);
    auto f = [](double t) { return Complex(std::cos(2.0 * t), std::sin(5.0 * t)); };
    for (int j = 0; j < 2 * M; ++j) v(j) = f(j * pi / M);
    for (double t : {0.1, 1.3, 4.0}) CHECK(std::abs(trig_interpolate(v, t) - f(t)) < 1e-13);
    CHECK(std::abs(trig_interpolate(v, pi / M) - v(1)) < 1e-14);
}

TEST_CASE("free-space matrices at nodes are consistent with the rows at shifted parameters") {
    ObstacleCurve c;
    c.size = 0.5;
    const CurveNodes n = obstacle_nodes(c, 16);
    std::vector<double> ts(n.t.data(), n.t.data() + n.size());
    const auto a = free_space_boundary_matrices(c, n, 2.0, ts);
    // on a circle the double-layer kernel equals the adjoint one up to transposition
    CHECK((a.K - a.Kp.transpose()).norm() < 1e-12 * a.K.norm());
    CHECK((a.S - a.S.transpose()).norm() < 1e-12 * a.S.norm());
}

TEST_CASE("sound-soft circle against the Mie series") {
    CHECK(mie_error(BoundaryKind::sound_soft, MieKind::sound_soft) < 1e-4);
}

TEST_CASE("Neumann circle against the Mie series") {
    CHECK(mie_error(BoundaryKind::neumann, MieKind::neumann) < 1e-3);
}

TEST_CASE("penetrable circle against the Mie series") {
    CHECK(mie_error(BoundaryKind::penetrable, MieKind::penetrable) < 1e-3);
}

TEST_CASE("impedance circle against its separated solution") {
    const NestedGreen& g = free_green();
    ObstacleSpec spec = circle_spec(BoundaryKind::impedance);
    spec.lambda = 1.5;
    const ObstacleSolver ob(g, spec);
    const Point src(0.0, 0.8);
    const MatrixXc psi = ob.solve(point_source(ob.probe_points(), src));
    const auto xs = ring(spec.curve.center, 4);
    const VectorXc w = ob.potential(xs, g.correction_rows(xs)) * psi;
    // d_r u + i lambda u = 0 at r = a: b_m = -(k J_m' + i lambda J_m) / (k H_m' + i lambda H_m)
    const double k = 2.0, a = 0.5, lam = 1.5;
    auto jm = [](int m, double x) { return std::cyl_bessel_j(std::abs(m), x) * (m < 0 && m % 2 ? -1.0 : 1.0); };
    auto ym = [](int m, double x) { return std::cyl_neumann(std::abs(m), x) * (m < 0 && m % 2 ? -1.0 : 1.0); };
    auto hm = [&](int m, double x) { return Complex(jm(m, x), ym(m, x)); };
    for (std::size_t q = 0; q < xs.size(); ++q) {
        const Point dx = xs[q] - spec.curve.center, ds = src - spec.curve.center;
        const double th = std::atan2(dx(1), dx(0)) - std::atan2(ds(1), ds(0));
        Complex sum{0.0, 0.0};
        for (int m = -30; m <= 30; ++m) {
            const double dj = 0.5 * (jm(m - 1, k * a) - jm(m + 1, k * a));
            const Complex dh = 0.5 * (hm(m - 1, k * a) - hm(m + 1, k * a));
            const Complex b = -(k * dj + I * lam * jm(m, k * a)) / (k * dh + I * lam * hm(m, k * a));
            sum += b * hm(m, k * ds.norm()) * hm(m, k * dx.norm()) * std::exp(I * double(m) * th);
        }
        CHECK(std::abs(w(static_cast<Eigen::Index>(q)) - 0.25 * I * sum) < 1e-3);
    }
}

TEST_CASE("boundary condition holds between the nodes") {
    const NestedGreen& g = free_green();
    for (BoundaryKind kind : {BoundaryKind::sound_soft, BoundaryKind::neumann}) {
        const ObstacleSolver ob(g, circle_spec(kind));
        const Point src(0.0, 0.8);
        const MatrixXc psi = ob.solve(point_source(ob.probe_points(), src));
        std::vector<double> ts;
        for (int k = 0; k < 16; ++k) ts.push_back((k + 0.5) * pi / 8.0 + 0.01);
        const MatrixXc inc = point_source(ob.trace_points(ts), src);
        CHECK(ob.boundary_residual(ts, psi, inc).cwiseAbs().maxCoeff() < 1e-3);
    }
}

TEST_CASE("density is linear in the incident amplitude") {
    const NestedGreen& g = free_green();
    const ObstacleSolver ob(g, circle_spec(BoundaryKind::sound_soft));
    const MatrixXc inc = point_source(ob.probe_points(), {0.3, 0.9});
    const MatrixXc a = ob.solve(inc), b = ob.solve(2.0 * inc);
    CHECK((b - 2.0 * a).norm() <= 1e-13 * b.norm());
}

TEST_CASE("admissibility") {
    const NestedGreen& g = free_green();
    ObstacleSpec s = circle_spec(BoundaryKind::sound_soft);
    s.curve.center = Point(0.0, -0.3);
    CHECK_THROWS_AS(ObstacleSolver(g, s), GeometryError);
    s = circle_spec(BoundaryKind::impedance);
    s.lambda = -1.0;
    CHECK_THROWS_AS(ObstacleSolver(g, s), ConfigError);
    const ObstacleSolver ob(g, circle_spec(BoundaryKind::sound_soft));
    CHECK_THROWS_AS(ob.rhs(MatrixXc::Zero(3, 1)), ConfigError);
}

}
