#ifndef LSCAT_OBSTACLE_HPP
#define LSCAT_OBSTACLE_HPP

#include <vector>

#include "lscat/geometry.hpp"
#include "lscat/ls_volume.hpp"

namespace lscat {

enum class BoundaryKind { sound_soft, neumann, impedance, penetrable };

struct ObstacleSpec {
    BoundaryKind kind = BoundaryKind::sound_soft;
    ObstacleCurve curve;
    /// 2M boundary nodes
    int M = 32;
    /// impedance lambda >= 0; neumann forces 0
    double lambda = 0.0;
    /// refractive index n on D (penetrable)
    Complex index{1.0, 0.0};
    /// D mesh (penetrable)
    MeshOptions mesh{0.02, 8};
    /// finite-difference step relative to diam(D)
    double fd_step = 1e-4;
};

/// Kress weights R_j(t) = R(t - t_j) for the log-singular periodic rule on 2M nodes.
Eigen::VectorXd kress_weights(int M, double t);

/// Trigonometric interpolant of node values at parameter t.
Complex trig_interpolate(const VectorXc& values, double t);

/// Free-space Nystrom matrices for 2 int Phi psi ds (S), 2 int dPhi/dnu(y) psi ds (K)
/// and 2 int dPhi/dnu(x) psi ds (K') at wavenumber kappa, rows at parameters ts.
struct BoundaryMatrices {
    MatrixXc S;
    MatrixXc K;
    MatrixXc Kp;
};
BoundaryMatrices free_space_boundary_matrices(const ObstacleCurve& curve, const CurveNodes& nodes,
                                              double kappa, const std::vector<double>& ts);

/// Embedded obstacle with the rough-interface Green's function as kernel.
/// Impenetrable kinds discretize a boundary density on 2M nodes, the penetrable
/// kind a volume field on the D mesh. Both are driven by the layered incident
/// field sampled at probe_points().
class ObstacleSolver {
public:
    ObstacleSolver(const NestedGreen& green, const ObstacleSpec& spec);

    const ObstacleSpec& spec() const { return spec_; }
    const CurveNodes& nodes() const { return nodes_; }
    const RegionMesh& mesh() const { return mesh_; }
    const DenseOperator& system() const { return system_; }
    double fd_step() const { return delta_; }

    /// Points where the incident field U(.; Gamma) must be supplied: nodes, nodes +
    /// delta nu, nodes - delta nu for boundary kinds; D cell centres otherwise.
    const std::vector<Point>& probe_points() const { return probes_; }

    /// Right-hand side of the discrete equation from incident values at the probes.
    MatrixXc rhs(const MatrixXc& incident) const;
    /// Densities (boundary psi or volume u), one column per source.
    MatrixXc solve(const MatrixXc& incident) const;

    /// Matrix P with w(x) = P psi at the points xs; `rows` = green.correction_rows(xs).
    MatrixXc potential(const std::vector<Point>& xs, const MatrixXc& rows) const;

    /// Points x(t), x(t) + delta nu, x(t) - delta nu per parameter, for trace checks.
    std::vector<Point> trace_points(const std::vector<double>& ts) const;
    /// Boundary-condition residual at off-node parameters: the total field trace
    /// (sound-soft) or d_nu u + i lambda u (neumann, impedance). `incident` holds
    /// U(.; Gamma) at trace_points(ts).
    MatrixXc boundary_residual(const std::vector<double>& ts, const MatrixXc& density,
                               const MatrixXc& incident) const;

private:
    // smooth part G^s + C of the kernel between xs and the probe points
    MatrixXc remainder(const std::vector<Point>& xs, const MatrixXc& rows) const;

    const NestedGreen* green_;
    ObstacleSpec spec_;
    double kappa_;
    double delta_ = 0.0;
    CurveNodes nodes_;
    RegionMesh mesh_;
    std::vector<Point> probes_;
    NestedSolution probe_solution_;
    Eigen::VectorXcd contrast_weights_;
    DenseOperator system_;
};

}  // namespace lscat

#endif  // LSCAT_OBSTACLE_HPP
