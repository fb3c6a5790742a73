#include "lscat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace lscat {

namespace {

constexpr int profile_samples = 4001;
constexpr int curve_samples = 1024;

double bump_value(const Bump& b, double x1) {
    const double t = (x1 - b.center) / b.halfwidth;
    if (std::abs(t) >= 1.0) return 0.0;
    return b.height * std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double bump_slope(const Bump& b, double x1) {
    const double t = (x1 - b.center) / b.halfwidth;
    if (std::abs(t) >= 1.0) return 0.0;
    const double q = 1.0 - t * t;
    return b.height * std::exp(1.0 - 1.0 / q) * (-2.0 * t / (q * q)) / b.halfwidth;
}

std::vector<double> sample_grid(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int k = 0; k < n; ++k) xs[k] = lo + (hi - lo) * k / (n - 1);
    return xs;
}

RegionMesh build_lattice_mesh(RegionTag tag, double h, int subsample, const Point& origin,
                              int i_begin, int i_end, int j_begin, int j_end,
                              const std::function<bool(const Point&)>& inside) {
    if (!(h > 0.0)) throw ConfigError("cell_size must be positive");
    if (subsample < 1) throw ConfigError("subsample must be at least 1");

    struct Raw {
        Point center;
        double weight;
        int i, j;
        bool kept;
    };
    std::vector<Raw> raw;
    const double area = h * h;
    const double sub = 1.0 / subsample;
    for (int j = j_begin; j < j_end; ++j) {
        for (int i = i_begin; i < i_end; ++i) {
            const Point corner = origin + Point(i * h, j * h);
            int hits = 0;
            for (int b = 0; b < subsample; ++b)
                for (int a = 0; a < subsample; ++a)
                    hits += inside(corner + Point((a + 0.5) * sub * h, (b + 0.5) * sub * h));
            const Point c = corner + Point(0.5 * h, 0.5 * h);
            const bool kept = inside(c);
            if (!kept && hits == 0) continue;
            raw.push_back({c, area * hits / double(subsample * subsample), i, j, kept});
        }
    }

    std::map<std::pair<int, int>, std::size_t> index;
    for (std::size_t k = 0; k < raw.size(); ++k)
        if (raw[k].kept) index[{raw[k].i, raw[k].j}] = k;

    // a kept cell may itself have weight 0 if the subsample grid misses it
    static const int offsets[8][2] = {{0, 1}, {0, -1}, {1, 0}, {-1, 0},
                                      {1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
    for (auto& r : raw) {
        if (r.kept) continue;
        for (const auto& o : offsets) {
            auto it = index.find({r.i + o[0], r.j + o[1]});
            if (it != index.end()) {
                raw[it->second].weight += r.weight;
                break;
            }
        }
    }

    RegionMesh mesh;
    mesh.tag = tag;
    mesh.cell_size = h;
    mesh.origin = origin;
    for (const auto& r : raw) {
        if (!r.kept) continue;
        if (r.weight == 0.0) {
            mesh.cells.push_back({r.center, 0.25 * area / (subsample * subsample), r.i, r.j});
        } else {
            mesh.cells.push_back({r.center, r.weight, r.i, r.j});
        }
    }
    if (mesh.cells.empty()) throw ConfigError("region mesh is empty; cell_size too coarse");
    return mesh;
}

}  // namespace

InterfaceProfile::InterfaceProfile(std::vector<Bump> bumps) : bumps_(std::move(bumps)) {
    for (const auto& b : bumps_) {
        if (!(b.halfwidth > 0.0)) throw ConfigError("bump halfwidth must be positive");
        if (!std::isfinite(b.center) || !std::isfinite(b.height))
            throw ConfigError("bump parameters must be finite");
    }
    if (bumps_.empty()) return;
    const double rho = support_radius();
    for (double x1 : sample_grid(-rho, rho, profile_samples)) {
        const double v = f(x1);
        max_abs_ = std::max(max_abs_, std::abs(v));
        max_value_ = std::max(max_value_, v);
    }
    for (const auto& b : bumps_) {
        const double v = f(b.center);
        max_abs_ = std::max(max_abs_, std::abs(v));
        max_value_ = std::max(max_value_, v);
    }
}

double InterfaceProfile::f(double x1) const {
    double v = 0.0;
    for (const auto& b : bumps_) v += bump_value(b, x1);
    return v;
}

double InterfaceProfile::df(double x1) const {
    double v = 0.0;
    for (const auto& b : bumps_) v += bump_slope(b, x1);
    return v;
}

double InterfaceProfile::support_radius() const {
    double rho = 0.0;
    for (const auto& b : bumps_) rho = std::max(rho, std::abs(b.center) + b.halfwidth);
    return rho;
}

Point InterfaceProfile::normal(double x1) const {
    const double s = df(x1);
    return Point(-s, 1.0) / std::sqrt(1.0 + s * s);
}

double ArcInterface::height(double x1) const {
    if (std::abs(x1) >= R) return 0.0;
    return -std::sqrt((R - x1) * (R + x1));
}

void SceneGeometry::validate() const {
    if (!(arc.R > 0.0)) throw GeometryError("arc radius R must be positive");
    if (!(arc.R > interface.support_radius()))
        throw GeometryError("arc radius R must exceed the support radius of the interface");
    for (double x1 : sample_grid(-arc.R, arc.R, profile_samples)) {
        if (std::abs(x1) >= arc.R) continue;
        if (!(interface.f(x1) > arc.height(x1)))
            throw GeometryError("interface must lie strictly above the arc");
    }
}

double default_arc_radius(const InterfaceProfile& profile) {
    if (profile.flat()) return 1.0;
    return 2.0 * (profile.support_radius() + profile.max_abs());
}

PointClass classify_point(const Point& p, const SceneGeometry& scene, const Medium& medium) {
    const double f = scene.interface.f(p(0));
    if (p(1) > f) return {Region::omega1, medium.kappa1};
    if (p(1) < f) return {Region::omega2, medium.kappa2};
    return {Region::on_interface, medium.kappa1};
}

double arc_kappa(const Point& p, const SceneGeometry& scene, const Medium& medium) {
    return p(1) > scene.arc.height(p(0)) ? medium.kappa1 : medium.kappa2;
}

bool in_B1(const Point& p, const SceneGeometry& scene) {
    return std::abs(p(0)) < scene.arc.R && p(1) < 0.0 && p(1) > scene.arc.height(p(0));
}

bool in_B2(const Point& p, const SceneGeometry& scene) {
    return std::abs(p(0)) < scene.arc.R && p(1) < scene.interface.f(p(0)) &&
           p(1) > scene.arc.height(p(0));
}

Eigen::VectorXd RegionMesh::weights() const {
    Eigen::VectorXd w(size());
    for (Eigen::Index k = 0; k < size(); ++k) w(k) = cells[k].weight;
    return w;
}

double RegionMesh::total_weight() const {
    double s = 0.0;
    for (const auto& c : cells) s += c.weight;
    return s;
}

RegionMesh build_region_mesh(RegionTag tag, const SceneGeometry& scene, double cell_size,
                             int subsample) {
    if (tag == RegionTag::D_penetrable)
        throw ConfigError("build_region_mesh: use build_obstacle_mesh for D");
    if (!(cell_size > 0.0)) throw ConfigError("cell_size must be positive");
    const double h = cell_size;
    const int n = static_cast<int>(std::ceil(scene.arc.R / h));
    const Point origin(-n * h, -n * h);
    const int j_top = tag == RegionTag::B1
                          ? n
                          : n + std::max(0, static_cast<int>(std::ceil(scene.interface.max_value() / h)));
    if (tag == RegionTag::B1) {
        return build_lattice_mesh(tag, h, subsample, origin, 0, 2 * n, 0, j_top,
                                  [&](const Point& p) { return in_B1(p, scene); });
    }
    return build_lattice_mesh(tag, h, subsample, origin, 0, 2 * n, 0, j_top,
                              [&](const Point& p) { return in_B2(p, scene); });
}

Point ObstacleCurve::x(double t) const {
    if (kind == CurveKind::circle) return center + size * Point(std::cos(t), std::sin(t));
    return center +
           size * Point(std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65, 1.5 * std::sin(t));
}

Point ObstacleCurve::dx(double t) const {
    if (kind == CurveKind::circle) return size * Point(-std::sin(t), std::cos(t));
    return size * Point(-std::sin(t) - 1.3 * std::sin(2.0 * t), 1.5 * std::cos(t));
}

Point ObstacleCurve::ddx(double t) const {
    if (kind == CurveKind::circle) return size * Point(-std::cos(t), -std::sin(t));
    return size * Point(-std::cos(t) - 2.6 * std::cos(2.0 * t), -1.5 * std::sin(t));
}

bool ObstacleCurve::contains(const Point& p) const {
    if (kind == CurveKind::circle) return (p - center).norm() < size;
    // even-odd ray casting on a fine polygon
    bool in = false;
    Point prev = x(0.0);
    for (int k = 1; k <= curve_samples; ++k) {
        const Point cur = x(2.0 * pi * k / curve_samples);
        if ((cur(1) > p(1)) != (prev(1) > p(1))) {
            const double xc = prev(0) + (p(1) - prev(1)) * (cur(0) - prev(0)) / (cur(1) - prev(1));
            if (p(0) < xc) in = !in;
        }
        prev = cur;
    }
    return in;
}

double ObstacleCurve::diameter() const {
    if (kind == CurveKind::circle) return 2.0 * size;
    double d = 0.0;
    const int n = 256;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            d = std::max(d, (x(2.0 * pi * a / n) - x(2.0 * pi * b / n)).norm());
    return d;
}

CurveNodes obstacle_nodes(const ObstacleCurve& curve, int M) {
    if (M < 4) throw ConfigError("obstacle discretization requires M >= 4");
    if (!(curve.size > 0.0)) throw ConfigError("obstacle size must be positive");
    CurveNodes nodes;
    nodes.M = M;
    const int n = 2 * M;
    nodes.t.resize(n);
    nodes.x.resize(2, n);
    nodes.dx.resize(2, n);
    nodes.ddx.resize(2, n);
    nodes.normal.resize(2, n);
    nodes.jacobian.resize(n);
    for (int k = 0; k < n; ++k) {
        const double t = k * pi / M;
        nodes.t(k) = t;
        nodes.x.col(k) = curve.x(t);
        const Point d = curve.dx(t);
        nodes.dx.col(k) = d;
        nodes.ddx.col(k) = curve.ddx(t);
        // for the circle |x'| = radius exactly
        const double jac = curve.kind == CurveKind::circle ? curve.size : d.norm();
        nodes.jacobian(k) = jac;
        nodes.normal.col(k) = Point(d(1), -d(0)) / d.norm();
    }
    return nodes;
}

RegionMesh build_obstacle_mesh(const ObstacleCurve& curve, double cell_size, int subsample,
                               const Point* lattice_origin) {
    if (!(cell_size > 0.0)) throw ConfigError("cell_size must be positive");
    const double h = cell_size;
    double lo1 = curve.center(0), hi1 = lo1, lo2 = curve.center(1), hi2 = lo2;
    for (int k = 0; k < curve_samples; ++k) {
        const Point p = curve.x(2.0 * pi * k / curve_samples);
        lo1 = std::min(lo1, p(0));
        hi1 = std::max(hi1, p(0));
        lo2 = std::min(lo2, p(1));
        hi2 = std::max(hi2, p(1));
    }
    Point origin(std::floor(lo1 / h) * h - h, std::floor(lo2 / h) * h - h);
    if (lattice_origin) {
        const Point& o = *lattice_origin;
        origin = Point(o(0) + std::floor((lo1 - o(0)) / h) * h - h,
                       o(1) + std::floor((lo2 - o(1)) / h) * h - h);
    }
    const int ni = static_cast<int>(std::ceil((hi1 - origin(0)) / h)) + 1;
    const int nj = static_cast<int>(std::ceil((hi2 - origin(1)) / h)) + 1;
    return build_lattice_mesh(RegionTag::D_penetrable, h, subsample, origin, 0, ni, 0, nj,
                              [&](const Point& p) { return curve.contains(p); });
}

void check_obstacle(const ObstacleCurve& curve, const SceneGeometry& scene) {
    for (int k = 0; k < curve_samples; ++k) {
        const Point p = curve.x(2.0 * pi * k / curve_samples);
        if (!(scene.interface.f(p(0)) - p(1) > 0.0))
            throw GeometryError("obstacle must lie strictly below the interface");
        if (std::abs(p(0)) <= scene.arc.R && !(p(1) < scene.arc.height(p(0))))
            throw GeometryError("obstacle must lie outside the closure of B1 and B2");
    }
}

std::vector<Point> ReceiverLine::points() const {
    if (count < 1) throw ConfigError("receiver count must be positive");
    std::vector<Point> pts;
    pts.reserve(count);
    if (count == 1) {
        pts.emplace_back(0.0, b);
        return pts;
    }
    for (int k = 0; k < count; ++k) pts.emplace_back(-a + 2.0 * a * k / (count - 1), b);
    return pts;
}

void ReceiverLine::validate(const InterfaceProfile& profile) const {
    if (!(a > 0.0)) throw ConfigError("receiver half-length a must be positive");
    if (count < 1) throw ConfigError("receiver count must be positive");
    if (!(b > profile.max_abs())) throw GeometryError("receiver line must satisfy b > max|f|");
}

}  // namespace lscat
