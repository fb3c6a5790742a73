#include <cmath>
#include <random>

#include "doctest.h"
#include "lscat/config.hpp"

using namespace lscat;

TEST_SUITE("config") {

TEST_CASE("minimal and full documents") {
    const RunConfig a = parse_run_config(R"({"medium": {"kappa1": 1, "kappa2": 2}})");
    CHECK(a.scene.medium.kappa2 == 2.0);
    CHECK(a.sources.empty());
    CHECK_FALSE(a.receivers.has_value());

    const RunConfig b = parse_run_config(R"({
      "medium": {"kappa1": 1.0, "kappa2": 2.0},
      "interface": {"bumps": [{"center": 0.0, "halfwidth": 0.5, "height": 0.3}]},
      "arc_radius_R": 1.0,
      "obstacle": {"kind": "penetrable", "curve": {"shape": "kite", "center": [0, -2.2], "size": 0.3},
                   "n": [1.5, 0.1], "mesh": {"cell_size": 0.05, "subsample": 4}},
      "mesh": {"cell_size": 0.1, "subsample": 2},
      "quadrature": {"tol": 1e-9},
      "solver": {"threads": 2},
      "sources": [[0, 1.5], [0.5, 1.5]],
      "receivers": {"b": 1.5, "a": 1.0, "count": 7},
      "experiment": {"z_star_x1": 0.0, "delta0": 0.1, "eps0": 0.2, "n_max": 16},
      "verify": {"seed": 3}
    })");
    CHECK(b.scene.obstacle->kind == BoundaryKind::penetrable);
    CHECK(b.scene.obstacle->curve.kind == CurveKind::kite);
    CHECK(b.scene.obstacle->index == Complex(1.5, 0.1));
    CHECK(b.scene.mesh.subsample == 2);
    CHECK(b.scene.quad.tol == 1e-9);
    CHECK(b.threads == 2);
    CHECK(b.sources.size() == 2);
    CHECK(b.receivers->count == 7);
    CHECK(b.experiment->n_max == 16);
    CHECK(b.verify.seed == 3u);
    CHECK(b.verify.medium.kappa1 == 1.0);
}

TEST_CASE("strict schema") {
    CHECK_THROWS_AS(parse_run_config(""), ConfigError);
    CHECK_THROWS_AS(parse_run_config("{}"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"medium": {"kappa1": 1, "kappa2": 2}, "extra": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"medium": {"kappa1": 1, "kappa2": 2, "kappa3": 3}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"medium": {"kappa1": "1", "kappa2": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"medium": {"kappa1": 1, "kappa2": 2}, "mesh": {"subsample": 1.5}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"medium": {"kappa1": 1, "kappa2": 2}, "sources": [[0]]})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"medium": {"kappa1": 1, "kappa2": 2},
        "obstacle": {"kind": "rigid", "curve": {"shape": "circle", "center": [0, -2], "size": 0.3}}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"medium": {"kappa1": 1, "kappa2": 2},
        "obstacle": {"kind": "impedance", "curve": {"shape": "circle", "center": [0, -2], "size": 0.3}}})"),
                    ConfigError);
}

TEST_CASE("geometry is checked at load") {
    CHECK_THROWS_AS(parse_run_config(R"({"medium": {"kappa1": 1, "kappa2": 2},
        "interface": {"bumps": [{"center": 0, "halfwidth": 0.5, "height": 0.3}]},
        "receivers": {"b": 0.2, "a": 1, "count": 3}})"),
                    GeometryError);
    CHECK_THROWS_AS(parse_run_config(R"({"medium": {"kappa1": 1, "kappa2": 2}, "arc_radius_R": 1,
        "obstacle": {"kind": "sound_soft", "curve": {"shape": "circle", "center": [0, -0.5], "size": 0.3}}})"),
                    GeometryError);
}

TEST_CASE("property: shortest round-trip formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-7) == "1e-07");
    CHECK(format_double(-2.0) == "-2");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int k = 0; k < 2000; ++k) {
        const double v = u(rng) * std::pow(10.0, k % 40 - 20);
        CHECK(std::stod(format_double(v)) == v);
    }
}

}
