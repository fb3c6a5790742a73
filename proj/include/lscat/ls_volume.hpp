#ifndef LSCAT_LS_VOLUME_HPP
#define LSCAT_LS_VOLUME_HPP

#include <optional>
#include <vector>

#include "lscat/geometry.hpp"
#include "lscat/layered_green.hpp"

namespace lscat {

/// Dense complex operator with an optional partial-pivoting LU factorization.
class DenseOperator {
public:
    DenseOperator() = default;
    explicit DenseOperator(MatrixXc a) : a_(std::move(a)) {}

    Eigen::Index size() const { return a_.rows(); }
    const MatrixXc& matrix() const { return a_; }
    bool factorized() const { return lu_.has_value(); }

    /// Throws SolverError if a pivot vanishes.
    void factorize();
    /// Reciprocal condition estimate in the 1-norm; 0 before factorization.
    double rcond() const;

    VectorXc solve(const VectorXc& rhs) const;
    MatrixXc solve(const MatrixXc& rhs) const;

    /// ||A x - rhs||_inf / ||rhs||_inf, column-wise maximum.
    double relative_residual(const MatrixXc& x, const MatrixXc& rhs) const;

private:
    MatrixXc a_;
    std::optional<Eigen::PartialPivLU<MatrixXc>> lu_;
};

/// Planar Green's function G(., .; Gamma0) between centres of one uniform lattice.
/// Translation invariance in x1 reduces the scattered part to tables keyed by
/// (|di|, ja + jb) on one side and (|di|, j_upper, j_lower) across Gamma0.
/// Coincident cells get the cell average of Phi plus G^s at the centre.
class LatticeGreen {
public:
    LatticeGreen(const Medium& medium, double cell_size, const Point& origin,
                 const QuadOptions& quad);

    /// Lattice indices of a mesh cell in this lattice; throws if misaligned.
    std::pair<int, int> global_index(const RegionMesh& mesh, const Cell& cell) const;

    /// G(rows[a], cols[b]) for cells given in global lattice indices.
    MatrixXc matrix(const std::vector<std::pair<int, int>>& rows,
                    const std::vector<std::pair<int, int>>& cols) const;

    double x2(int j) const { return origin_(1) + (j + 0.5) * h_; }

private:
    Medium medium_;
    double h_;
    Point origin_;
    QuadOptions quad_;
};

/// I + eta K0 W1 (stage 1, planar -> arc).
DenseOperator assemble_B1_operator(const MatrixXc& k0, const Eigen::VectorXd& w1, double eta);
/// I - eta KR W2 (stage 2, arc -> rough); note the opposite sign.
DenseOperator assemble_B2_operator(const MatrixXc& kr, const Eigen::VectorXd& w2, double eta);

struct MeshOptions {
    double cell_size = 0.05;
    int subsample = 4;
};

/// Per-source unknowns of the two nested Lippmann-Schwinger equations.
struct NestedSolution {
    /// U(.; Gamma_R) on B1 cells, one column per source
    MatrixXc phi;
    /// U(.; Gamma) on B2 cells
    MatrixXc u;
    /// W1 phi
    MatrixXc arc_weights;
    /// W1 (phi + eta Phi W2 u) and W2 u, the densities of the rough-field extension
    MatrixXc rough_weights1;
    MatrixXc rough_weights2;
};

/// Green's functions for the arc interface Gamma_R and the rough interface Gamma,
/// built from the planar one by the two nested volume equations. Both operators
/// are factorized once at construction; all queries are const and thread safe.
class NestedGreen {
public:
    NestedGreen(const SceneGeometry& scene, const Medium& medium, const MeshOptions& mesh,
                const QuadOptions& quad);

    const SceneGeometry& scene() const { return scene_; }
    const Medium& medium() const { return medium_; }
    const QuadOptions& quad() const { return quad_; }
    const RegionMesh& mesh_B1() const { return b1_; }
    const RegionMesh& mesh_B2() const { return b2_; }
    const LatticeGreen& lattice() const { return lattice_; }
    /// eta = 0: every Green's function equals the planar one.
    bool trivial() const { return trivial_; }
    const DenseOperator& stage1_operator() const { return a1_; }
    const DenseOperator& stage2_operator() const { return a2_; }
    Eigen::Index union_size() const { return static_cast<Eigen::Index>(union_cells_.size()); }
    const std::vector<Point>& union_centers() const { return union_centers_; }

    /// Row block G(x, c; Gamma0) over the union of B1 and B2 cells.
    MatrixXc planar_rows(const std::vector<Point>& xs) const;
    /// planar_rows(xs), or an empty block when the corrections vanish (eta = 0).
    MatrixXc correction_rows(const std::vector<Point>& xs) const;
    /// Incident planar field U(c, xs; Gamma0) on the union cells, one column per source.
    MatrixXc planar_incident(const std::vector<SourceSpec>& sources) const;

    /// Stage-1 then stage-2 solves for the given incident columns.
    NestedSolution solve(const MatrixXc& incident) const;

    /// U(x; Gamma_R) - U(x; Gamma0) for rows = planar_rows(x).
    MatrixXc arc_correction(const MatrixXc& rows, const NestedSolution& sol) const;
    /// U(x; Gamma) - U(x; Gamma0).
    MatrixXc rough_correction(const MatrixXc& rows, const NestedSolution& sol) const;

    Complex planar_field(const SourceSpec& src, const Point& x) const;
    Complex arc_field(const SourceSpec& src, const Point& x) const;
    Complex rough_field(const SourceSpec& src, const Point& x) const;
    /// Monopole kernels G(x, y; Gamma_R) and G(x, y; Gamma).
    Complex green_arc(const Point& x, const Point& y) const;
    Complex green_rough(const Point& x, const Point& y) const;

    /// ||A u - rhs|| / ||rhs|| for both stages of a solution.
    double stage1_residual(const MatrixXc& incident, const NestedSolution& sol) const;
    double stage2_residual(const MatrixXc& incident, const NestedSolution& sol) const;

private:
    MatrixXc stage2_rhs(const MatrixXc& incident, const MatrixXc& phi) const;

    SceneGeometry scene_;
    Medium medium_;
    QuadOptions quad_;
    RegionMesh b1_, b2_;
    LatticeGreen lattice_;
    bool trivial_ = false;
    double eta_ = 0.0;

    std::vector<std::pair<int, int>> union_cells_;
    std::vector<Point> union_centers_;
    std::vector<Eigen::Index> b1_in_union_, b2_in_union_;
    Eigen::VectorXd w1_, w2_;

    // G0 from B2 cells to B1 cells (n2 x n1), needed for the stage-2 right-hand side
    MatrixXc g21_;
    DenseOperator a1_, a2_;
};

}  // namespace lscat

#endif  // LSCAT_LS_VOLUME_HPP
