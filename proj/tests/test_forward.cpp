#include <cmath>

#include "doctest.h"
#include "lscat/forward.hpp"

using namespace lscat;

namespace {

SceneConfig bump_scene(double height) {
    SceneConfig c;
    c.medium = {1.0, 2.0};
    if (height != 0.0) c.interface = InterfaceProfile({Bump{0.0, 0.5, height}});
    c.arc_radius = 1.0;
    c.mesh = {0.1, 4};
    return c;
}

std::vector<Point> line(int count) { return ReceiverLine{1.5, 1.0, count}.points(); }

}  // namespace

TEST_SUITE("forward") {

TEST_CASE("nothing scatters without contrast") {
    SceneConfig c;
    c.medium = {1.5, 1.5};
    c.arc_radius = 1.0;
    const ForwardModel model(c);
    const auto rows = synthesize_dataset(model, {{0.0, 1.5}, {0.4, 2.0}}, line(11));
    CHECK(rows.size() == 22);
    for (const auto& r : rows) CHECK(std::abs(r.value) <= 1e-7);
}

TEST_CASE("flat interface reproduces the planar scattered field") {
    const ForwardModel model(bump_scene(0.0));
    const Point xs(-0.3, 1.2);
    const auto rows = synthesize_dataset(model, {xs}, line(5));
    for (const auto& r : rows)
        CHECK(std::abs(r.value - green_planar_scattered(r.receiver, xs, model.config().medium)) <
              1e-8 * std::abs(r.value));
}

TEST_CASE("dataset rows are source-major and deterministic") {
    const ForwardModel model(bump_scene(0.3));
    const std::vector<Point> src{{-0.5, 1.3}, {0.5, 1.1}};
    const auto a = synthesize_dataset(model, src, line(3));
    const auto b = synthesize_dataset(model, src, line(3));
    REQUIRE(a.size() == 6);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].source_index == static_cast<int>(k / 3));
        CHECK(a[k].value == b[k].value);
    }
    const auto swapped = synthesize_dataset(model, {src[1], src[0]}, line(3));
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(swapped[k].value - a[k + 3].value) < 1e-14);
        CHECK(std::abs(swapped[k + 3].value - a[k].value) < 1e-14);
    }
}

TEST_CASE("batched sources superpose the single-source solutions") {
    SceneConfig c = bump_scene(0.3);
    ObstacleSpec ob;
    ob.curve.center = Point(0.0, -1.8);
    ob.curve.size = 0.4;
    ob.M = 16;
    c.obstacle = ob;
    const ForwardModel model(c);
    const SourceSpec a = SourceSpec::monopole({0.2, 1.4}), b = SourceSpec::monopole({-0.6, 1.0});
    const auto xs = line(4);
    const MatrixXc both = model.solve({a, b}).scattered(xs);
    const MatrixXc ua = model.solve({a}).scattered(xs), ub = model.solve({b}).scattered(xs);
    const VectorXc sum = both.col(0) + both.col(1);
    CHECK((sum - ua.col(0) - ub.col(0)).norm() < 1e-13 * sum.norm());
}

TEST_CASE("a bump of height 0.3 is visible in the data") {
    const ForwardModel flat(bump_scene(0.0)), bump(bump_scene(0.3));
    const std::vector<Point> src{{0.0, 1.5}};
    const auto a = synthesize_dataset(flat, src, line(5));
    const auto b = synthesize_dataset(bump, src, line(5));
    double diff = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) diff = std::max(diff, std::abs(a[k].value - b[k].value));
    CHECK(diff > 1e-3);
}

TEST_CASE("reciprocity of synthesized data on the measurement line") {
    const ForwardModel model(bump_scene(0.3));
    const auto pts = line(4);
    const auto rows = synthesize_dataset(model, pts, pts);
    for (std::size_t s = 0; s < pts.size(); ++s)
        for (std::size_t r = 0; r < pts.size(); ++r) {
            const Complex a = rows[s * pts.size() + r].value, b = rows[r * pts.size() + s].value;
            CHECK(std::abs(a - b) <= 2e-2 * std::abs(a));
        }
}

TEST_CASE("source and receiver admissibility") {
    const ForwardModel model(bump_scene(0.3));
    CHECK_THROWS_AS(model.solve({SourceSpec::monopole({0.0, 0.1})}), GeometryError);
    CHECK_THROWS_AS(model.solve({SourceSpec::dipole({0.0, 1.0}, 3)}), DomainError);
    CHECK_THROWS_AS(synthesize_dataset(model, {{0.0, 1.5}}, {{0.0, -0.5}}), GeometryError);
}

TEST_CASE("stage errors carry the stage name") {
    SceneConfig c = bump_scene(0.3);
    ObstacleSpec ob;
    ob.kind = BoundaryKind::penetrable;
    ob.index = Complex(-1.0, 0.0);
    ob.curve.center = Point(0.0, -1.8);
    ob.curve.size = 0.3;
    c.obstacle = ob;
    try {
        ForwardModel model(c);
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("obstacle") != std::string::npos);
    }
}

TEST_CASE("blow-up norms grow and are translation invariant") {
    const InterfaceProfile crest({Bump{0.0, 0.3, 0.5}});
    BlowupConfig cfg;
    cfg.radial_cells = 200;
    cfg.angular_cells = 512;
    const auto r = blowup_experiment(crest, Medium{1.0, 2.0}, cfg);
    REQUIRE(r.norm.size() == 64);
    CHECK(r.norm[15] > r.norm[0]);
    for (int n = 9; n <= 64; ++n) CHECK(r.norm[n - 1] > r.norm[n - 2]);
    CHECK(r.exponent > 0.0);
    CHECK_FALSE(r.resolution_warning);

    BlowupConfig moved = cfg;
    moved.z_star_x1 = 0.75;
    const auto t = blowup_experiment(InterfaceProfile({Bump{0.75, 0.3, 0.5}}), Medium{1.0, 2.0}, moved);
    for (std::size_t k = 0; k < r.norm.size(); ++k) CHECK(t.norm[k] == doctest::Approx(r.norm[k]).epsilon(1e-9));
}

TEST_CASE("doubling delta0 lowers every blow-up norm") {
    const InterfaceProfile crest({Bump{0.0, 0.3, 0.5}});
    BlowupConfig near, far;
    near.delta0 = 0.09;
    far.delta0 = 0.18;
    near.radial_cells = far.radial_cells = 200;
    near.angular_cells = far.angular_cells = 512;
    const auto a = blowup_experiment(crest, Medium{1.0, 2.0}, near);
    const auto b = blowup_experiment(crest, Medium{1.0, 2.0}, far);
    for (std::size_t k = 0; k < a.norm.size(); ++k) CHECK(b.norm[k] < a.norm[k]);
}

TEST_CASE("blow-up configuration errors and the two-scene variant") {
    const InterfaceProfile crest({Bump{0.0, 0.3, 0.5}});
    BlowupConfig bad;
    bad.delta0 = 0.3;
    bad.eps0 = 0.2;
    CHECK_THROWS_AS(blowup_experiment(crest, Medium{}, bad), ConfigError);
    BlowupConfig two;
    two.radial_cells = 100;
    two.angular_cells = 256;
    two.n_max = 16;
    two.second_interface = InterfaceProfile({Bump{0.0, 0.3, 0.4}});
    const auto r = blowup_experiment(crest, Medium{}, two);
    BlowupConfig one = two;
    one.second_interface.reset();
    const auto s = blowup_experiment(crest, Medium{}, one);
    for (std::size_t k = 0; k < r.norm.size(); ++k) CHECK(r.norm[k] < s.norm[k]);
}

TEST_CASE("mixed reciprocity in the free-space scene") {
    SceneConfig c;
    c.medium = {2.0, 2.0};
    c.arc_radius = 0.5;
    const ForwardModel model(c);
    const Point xs1(0.3, 1.5), xs2(-0.4, 0.9);
    for (int ell = 1; ell <= 2; ++ell) {
        const auto coarse = mixed_reciprocity_check(model, xs1, xs2, ell, 1e-2);
        const auto fine = mixed_reciprocity_check(model, xs1, xs2, ell, 5e-3);
        CHECK(coarse.mismatch <= 1e-3);
        CHECK(fine.mismatch < coarse.mismatch);
    }
    CHECK_THROWS_AS(mixed_reciprocity_check(model, xs1, xs2, 1, 1.0), GeometryError);
}

TEST_CASE("mixed reciprocity through the layered pipeline") {
    const ForwardModel model(bump_scene(0.3));
    const auto r = mixed_reciprocity_check(model, {0.3, 1.5}, {-0.4, 1.0}, 2, 1e-2);
    CHECK(r.mismatch <= 1e-3);
}

}
