#ifndef LSCAT_GEOMETRY_HPP
#define LSCAT_GEOMETRY_HPP

#include <vector>

#include "lscat/types.hpp"

namespace lscat {

/// One smooth bump: height * exp(1 - 1/(1 - t^2)), t = (x1 - center)/halfwidth.
struct Bump {
    double center = 0.0;
    double halfwidth = 1.0;
    double height = 0.0;
};

/// Rough interface x2 = f(x1) as a finite sum of compactly supported bumps.
class InterfaceProfile {
public:
    InterfaceProfile() = default;
    explicit InterfaceProfile(std::vector<Bump> bumps);

    double f(double x1) const;
    double df(double x1) const;
    /// Smallest rho with f = 0 outside [-rho, rho].
    double support_radius() const;
    double max_abs() const { return max_abs_; }
    double max_value() const { return max_value_; }
    bool flat() const { return bumps_.empty(); }
    const std::vector<Bump>& bumps() const { return bumps_; }

    /// Upward unit normal (-f', 1)/sqrt(1 + f'^2) at (x1, f(x1)).
    Point normal(double x1) const;

private:
    std::vector<Bump> bumps_;
    double max_abs_ = 0.0;
    double max_value_ = 0.0;
};

/// Gamma_R: x2 = 0 for |x1| >= R, lower half circle for |x1| < R.
struct ArcInterface {
    double R = 1.0;

    double height(double x1) const;
};

struct SceneGeometry {
    InterfaceProfile interface;
    ArcInterface arc;

    /// Throws GeometryError unless R > support_radius and f lies strictly above the arc.
    void validate() const;
};

/// Default arc radius 2 (support_radius + max|f|), or 1 for a flat interface.
double default_arc_radius(const InterfaceProfile& profile);

enum class Region { omega1, omega2, on_interface };

struct PointClass {
    Region region;
    double kappa;
};

/// Region relative to Gamma; on_interface reports kappa1.
PointClass classify_point(const Point& p, const SceneGeometry& scene, const Medium& medium);
/// Wavenumber of the Gamma_R problem: kappa1 above the arc interface, kappa2 below.
double arc_kappa(const Point& p, const SceneGeometry& scene, const Medium& medium);

bool in_B1(const Point& p, const SceneGeometry& scene);
bool in_B2(const Point& p, const SceneGeometry& scene);

enum class RegionTag { B1, B2, D_penetrable };

/// Cell of a uniform lattice with centre origin + ((i + 1/2) h, (j + 1/2) h).
struct Cell {
    Point center;
    double weight = 0.0;
    int i = 0;
    int j = 0;
};

struct RegionMesh {
    RegionTag tag = RegionTag::B1;
    double cell_size = 0.0;
    Point origin = Point::Zero();
    std::vector<Cell> cells;

    Eigen::Index size() const { return static_cast<Eigen::Index>(cells.size()); }
    Eigen::VectorXd weights() const;
    double total_weight() const;
};

/// B1 or B2 mesh on the lattice with origin (-N h, -N h), N = ceil(R / h), so
/// x2 = 0 is a grid line. Weights are h^2 times the inside fraction on a
/// subsample x subsample grid; slivers whose centre lies outside are lumped into
/// the nearest kept cell of the same row or column.
RegionMesh build_region_mesh(RegionTag tag, const SceneGeometry& scene, double cell_size,
                             int subsample);

enum class CurveKind { circle, kite };

/// Closed C^2 obstacle boundary, positively oriented.
struct ObstacleCurve {
    CurveKind kind = CurveKind::circle;
    Point center = Point::Zero();
    /// radius for a circle, scale for a kite
    double size = 1.0;

    Point x(double t) const;
    Point dx(double t) const;
    Point ddx(double t) const;
    bool contains(const Point& p) const;
    double diameter() const;
};

/// 2M equispaced samples t_j = j pi / M.
struct CurveNodes {
    int M = 0;
    Eigen::VectorXd t;
    Eigen::Matrix2Xd x;
    Eigen::Matrix2Xd dx;
    Eigen::Matrix2Xd ddx;
    /// outward unit normal (x2', -x1') / |x'|
    Eigen::Matrix2Xd normal;
    Eigen::VectorXd jacobian;

    Eigen::Index size() const { return t.size(); }
};

CurveNodes obstacle_nodes(const ObstacleCurve& curve, int M);

/// Uniform mesh of the obstacle interior (tag D_penetrable). With `lattice_origin`
/// the cells are aligned to the lattice of that origin and spacing cell_size.
RegionMesh build_obstacle_mesh(const ObstacleCurve& curve, double cell_size, int subsample,
                               const Point* lattice_origin = nullptr);

/// Throws GeometryError unless the obstacle lies strictly below Gamma and
/// outside the closures of B1 and B2.
void check_obstacle(const ObstacleCurve& curve, const SceneGeometry& scene);

/// `count` equispaced receivers on {(x1, b) : |x1| <= a}.
struct ReceiverLine {
    double b = 1.0;
    double a = 1.0;
    int count = 1;

    std::vector<Point> points() const;
    void validate(const InterfaceProfile& profile) const;
};

}  // namespace lscat

#endif  // LSCAT_GEOMETRY_HPP
