#include <cmath>
#include <map>

#include "doctest.h"
#include "lscat/ls_volume.hpp"
#include "lscat/specfun.hpp"

using namespace lscat;

namespace {

SceneGeometry scene(double R, std::vector<Bump> bumps = {}) {
    SceneGeometry s;
    s.interface = InterfaceProfile(std::move(bumps));
    s.arc.R = R;
    return s;
}

const NestedGreen& bump_green() {
    static const NestedGreen g(scene(1.0, {Bump{0.0, 0.5, 0.3}}), Medium{1.0, 2.0}, MeshOptions{0.1, 4},
                               QuadOptions{});
    return g;
}

}  // namespace

TEST_SUITE("ls_volume") {

TEST_CASE("dense operator solves and reports residuals") {
    MatrixXc a(2, 2);
    a << 2.0, 1.0, 1.0, 3.0;
    DenseOperator op(a);
    CHECK_FALSE(op.factorized());
    op.factorize();
    VectorXc b(2);
    b << 1.0, 2.0;
    const VectorXc x = op.solve(b);
    CHECK(op.relative_residual(x, b) < 1e-15);
    CHECK(op.rcond() > 0.1);
    DenseOperator singular(MatrixXc::Zero(2, 2));
    CHECK_THROWS_AS(singular.factorize(), SolverError);
}

TEST_CASE("lattice Green matrix is symmetric and uses the cell average on the diagonal") {
    const Medium m{1.0, 2.0};
    const double h = 0.1;
    const LatticeGreen lg(m, h, Point(-1.0, -1.0), QuadOptions{});
    const std::vector<std::pair<int, int>> cells{{3, 4}, {5, 9}, {7, 12}, {10, 13}};
    const MatrixXc g = lg.matrix(cells, cells);
    CHECK((g - g.transpose()).norm() < 1e-14);
    const Point c(-1.0 + 3.5 * h, -1.0 + 4.5 * h);
    const Complex diag = fundamental_solution_cell_average(2.0, h) + green_planar_scattered(c, c, m);
    CHECK(std::abs(g(0, 0) - diag) < 1e-7);
    const Point d(-1.0 + 10.5 * h, -1.0 + 13.5 * h);
    CHECK(std::abs(g(0, 3) - green_planar_total(c, d, m)) < 1e-7);
}

TEST_CASE("no contrast gives the trivial nested Green's function") {
    const NestedGreen g(scene(1.0), Medium{1.5, 1.5}, MeshOptions{0.1, 4}, QuadOptions{});
    CHECK(g.trivial());
    const std::vector<Point> xs{{0.0, 1.5}, {0.3, 2.0}};
    CHECK(g.correction_rows(xs).cols() == 0);
    const Point x(0.2, 1.0), y(-0.4, 0.8);
    CHECK(g.green_rough(x, y) == g.planar_field(SourceSpec::monopole(y), x));
}

TEST_CASE("flat interface: the rough field equals the planar field") {
    const NestedGreen g(scene(1.0), Medium{1.0, 2.0}, MeshOptions{0.1, 4}, QuadOptions{});
    CHECK_FALSE(g.trivial());
    const SourceSpec src = SourceSpec::monopole({0.3, 1.2});
    const auto sol = g.solve(g.planar_incident({src}));
    const std::vector<Point> xs{{-0.5, 1.5}, {0.0, 1.5}, {0.7, 1.5}};
    const MatrixXc c = g.rough_correction(g.planar_rows(xs), sol);
    CHECK(c.cwiseAbs().maxCoeff() < 1e-10);
    // while the arc interface does scatter differently
    const MatrixXc a = g.arc_correction(g.planar_rows(xs), sol);
    CHECK(a.cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("stage residuals are at round-off level") {
    const NestedGreen& g = bump_green();
    const MatrixXc inc = g.planar_incident({SourceSpec::monopole({0.0, 1.5}), SourceSpec::dipole({0.4, 1.2}, 2)});
    const auto sol = g.solve(inc);
    CHECK(g.stage1_residual(inc, sol) < 1e-12);
    CHECK(g.stage2_residual(inc, sol) < 1e-12);
    CHECK(g.stage1_operator().rcond() > 1e-6);
    CHECK(g.stage2_operator().rcond() > 1e-6);
}

TEST_CASE("discrete reciprocity of both corrected Green's functions") {
    const NestedGreen& g = bump_green();
    const Point x(0.3, 1.4), y(-0.6, 0.9);
    CHECK(std::abs(g.green_arc(x, y) - g.green_arc(y, x)) < 1e-10);
    CHECK(std::abs(g.green_rough(x, y) - g.green_rough(y, x)) < 1e-10);
    const Point z(0.2, -1.6);
    CHECK(std::abs(g.green_rough(x, z) - g.green_rough(z, x)) < 1e-10);
}

TEST_CASE("stage-1 cells solve the upper-medium Helmholtz equation") {
    // five-point residual of phi with kappa1 is far below the contrast term eta phi
    const NestedGreen& g = bump_green();
    const auto sol = g.solve(g.planar_incident({SourceSpec::monopole({0.0, 1.5})}));
    const RegionMesh& b1 = g.mesh_B1();
    std::map<std::pair<int, int>, Eigen::Index> at;
    for (Eigen::Index k = 0; k < b1.size(); ++k) at[{b1.cells[k].i, b1.cells[k].j}] = k;
    const double h = b1.cell_size, k1 = 1.0, eta = 3.0;
    int probes = 0;
    for (Eigen::Index k = 0; k < b1.size(); ++k) {
        const auto& c = b1.cells[k];
        if (c.center.norm() > 0.6 || c.center(1) > -0.2) continue;
        const auto e = at.find({c.i + 1, c.j}), w = at.find({c.i - 1, c.j});
        const auto n = at.find({c.i, c.j + 1}), s = at.find({c.i, c.j - 1});
        const Complex p = sol.phi(k, 0);
        const Complex lap = (sol.phi(e->second, 0) + sol.phi(w->second, 0) + sol.phi(n->second, 0) +
                             sol.phi(s->second, 0) - 4.0 * p) /
                            (h * h);
        CHECK(std::abs(lap + k1 * k1 * p) < 0.1 * eta * std::abs(p));
        ++probes;
    }
    CHECK(probes > 0);
}

TEST_CASE("composition with the planar incident field is linear") {
    const NestedGreen& g = bump_green();
    const SourceSpec a = SourceSpec::monopole({0.0, 1.5}), b = SourceSpec::monopole({0.5, 1.1});
    const MatrixXc inc = g.planar_incident({a, b});
    const auto sol = g.solve(inc);
    const auto sum = g.solve(MatrixXc(inc.col(0) + inc.col(1)));
    CHECK((sum.u.col(0) - sol.u.col(0) - sol.u.col(1)).norm() < 1e-12 * sum.u.norm());
}

TEST_CASE("input errors") {
    const NestedGreen& g = bump_green();
    CHECK_THROWS_AS(g.solve(MatrixXc::Zero(3, 1)), ConfigError);
    const Point c = g.union_centers().front();
    CHECK_THROWS_AS(g.planar_incident({SourceSpec::dipole(c, 1)}), SingularityError);
    RegionMesh shifted = g.mesh_B1();
    shifted.origin += Point(0.03, 0.0);
    CHECK_THROWS_AS(g.lattice().global_index(shifted, shifted.cells.front()), ConfigError);
}

}
