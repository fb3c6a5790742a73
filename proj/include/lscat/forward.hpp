#ifndef LSCAT_FORWARD_HPP
#define LSCAT_FORWARD_HPP

#include <memory>
#include <optional>
#include <vector>

#include "lscat/obstacle.hpp"

namespace lscat {

struct SceneConfig {
    Medium medium;
    InterfaceProfile interface;
    /// arc radius R; 0 selects default_arc_radius
    double arc_radius = 0.0;
    MeshOptions mesh;
    QuadOptions quad;
    std::optional<ObstacleSpec> obstacle;

    SceneGeometry geometry() const;
    /// Throws ConfigError or GeometryError for an inadmissible scene.
    void validate() const;
};

class ForwardModel;

/// Fields of one batch of sources. Columns follow the source order.
class FieldEvaluator {
public:
    const std::vector<SourceSpec>& sources() const { return sources_; }

    /// u(x, xs) = U(x, xs; Gamma) + w(x, xs), rows = points.
    MatrixXc total(const std::vector<Point>& xs) const;
    /// Free-space field of each source at kappa1.
    MatrixXc incident(const std::vector<Point>& xs) const;
    /// total - incident in Omega1, total in Omega2; finite at x = xs.
    MatrixXc scattered(const std::vector<Point>& xs) const;
    /// U(x, xs; Gamma) without the obstacle response.
    MatrixXc background(const std::vector<Point>& xs) const;

private:
    friend class ForwardModel;
    FieldEvaluator(const ForwardModel& model, std::vector<SourceSpec> sources);
    MatrixXc planar(const std::vector<Point>& xs, bool scattered_only) const;
    MatrixXc corrections(const std::vector<Point>& xs, bool with_obstacle) const;

    const ForwardModel* model_;
    std::vector<SourceSpec> sources_;
    NestedSolution nested_;
    MatrixXc density_;
};

/// Factorized pipeline for one scene: planar -> arc -> rough -> obstacle.
class ForwardModel {
public:
    explicit ForwardModel(const SceneConfig& config);

    const SceneConfig& config() const { return config_; }
    const NestedGreen& green() const { return *green_; }
    /// nullptr without an obstacle.
    const ObstacleSolver* obstacle() const { return obstacle_.get(); }

    /// Sources must lie in Omega1, off the interface and away from every mesh.
    FieldEvaluator solve(const std::vector<SourceSpec>& sources) const;

private:
    void check_source(const SourceSpec& src) const;

    SceneConfig config_;
    SceneGeometry geometry_;
    std::unique_ptr<NestedGreen> green_;
    std::unique_ptr<ObstacleSolver> obstacle_;
};

struct NearFieldRecord {
    int source_index = 0;
    Point source = Point::Zero();
    Point receiver = Point::Zero();
    Complex value;
};

/// u^s for every (source, receiver) pair, source-major. Receivers must lie in Omega1.
std::vector<NearFieldRecord> synthesize_dataset(const ForwardModel& model,
                                                const std::vector<Point>& sources,
                                                const std::vector<Point>& receivers);

struct BlowupConfig {
    /// z* = (x1, f(x1)) on the interface
    double z_star_x1 = 0.0;
    double delta0 = 0.19;
    double eps0 = 0.2;
    int n_max = 64;
    /// log-graded polar sample mesh around z*
    int radial_cells = 400;
    int angular_cells = 1024;
    /// innermost radius as a fraction of delta0 / n_max
    double inner_fraction = 1e-3;
    /// Gamma2 of the two-scene mode: D = B(z*) above Gamma2 and below Gamma1
    std::optional<InterfaceProfile> second_interface;
};

struct BlowupResult {
    std::vector<int> n;
    std::vector<double> norm;
    /// least-squares slope of log N_n against log n over n >= 8
    double exponent = 0.0;
    /// N_{n_max} / N_4
    double divergence_ratio = 0.0;
    /// some z_n sits within two local cell sizes of a mesh point
    bool resolution_warning = false;
    Point z_star = Point::Zero();
    Point normal = Point::Zero();
};

/// N_n = || nu . grad Phi_kappa1(., z_n) ||^2 over B_eps0(z*) below the interface,
/// z_n = z* + (delta0 / n) nu(z*).
BlowupResult blowup_experiment(const InterfaceProfile& interface, const Medium& medium,
                               const BlowupConfig& config);

struct MixedReciprocity {
    Complex lhs;
    Complex rhs;
    double mismatch = 0.0;
};

/// Dipole field u~(xs1, xs2, ell) against the boundary functional over the circle
/// of radius eps about xs2 applied to u(., xs1); 64-point trapezoid rule with the
/// normal pointing into the disc and central differences of step fd_step.
MixedReciprocity mixed_reciprocity_check(const ForwardModel& model, const Point& xs1,
                                         const Point& xs2, int ell, double eps,
                                         double fd_step = 1e-4);

}  // namespace lscat

#endif  // LSCAT_FORWARD_HPP
