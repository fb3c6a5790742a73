#include "lscat/ls_volume.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lscat/parallel.hpp"
#include "lscat/specfun.hpp"

namespace lscat {

namespace {

// Dense table over a rectangular key range with on-demand flags.
struct Table2 {
    int lo0 = 0, lo1 = 0, n0 = 0, n1 = 0;
    std::vector<char> needed;
    std::vector<Complex> values;

    void init(int a_lo, int a_hi, int b_lo, int b_hi) {
        lo0 = a_lo;
        lo1 = b_lo;
        n0 = std::max(0, a_hi - a_lo + 1);
        n1 = std::max(0, b_hi - b_lo + 1);
        needed.assign(static_cast<std::size_t>(n0) * n1, 0);
        values.assign(needed.size(), Complex{});
    }
    std::size_t at(int a, int b) const {
        return static_cast<std::size_t>(a - lo0) * n1 + static_cast<std::size_t>(b - lo1);
    }
};

struct Table3 {
    int lo0 = 0, lo1 = 0, lo2 = 0, n0 = 0, n1 = 0, n2 = 0;
    std::vector<char> needed;
    std::vector<Complex> values;

    void init(int a_lo, int a_hi, int b_lo, int b_hi, int c_lo, int c_hi) {
        lo0 = a_lo;
        lo1 = b_lo;
        lo2 = c_lo;
        n0 = std::max(0, a_hi - a_lo + 1);
        n1 = std::max(0, b_hi - b_lo + 1);
        n2 = std::max(0, c_hi - c_lo + 1);
        needed.assign(static_cast<std::size_t>(n0) * n1 * n2, 0);
        values.assign(needed.size(), Complex{});
    }
    std::size_t at(int a, int b, int c) const {
        return (static_cast<std::size_t>(a - lo0) * n1 + static_cast<std::size_t>(b - lo1)) * n2 +
               static_cast<std::size_t>(c - lo2);
    }
};

template <class Table, class Eval>
void fill_needed(Table& table, Eval&& eval) {
    std::vector<std::size_t> todo;
    for (std::size_t k = 0; k < table.needed.size(); ++k)
        if (table.needed[k]) todo.push_back(k);
    parallel_for(static_cast<Eigen::Index>(todo.size()),
                 [&](Eigen::Index k) { table.values[todo[k]] = eval(todo[k]); });
}

}  // namespace

void DenseOperator::factorize() {
    if (lu_) return;
    if (a_.rows() != a_.cols()) throw SolverError("DenseOperator: matrix is not square");
    lu_.emplace(a_);
    const auto& lu = lu_->matrixLU();
    for (Eigen::Index k = 0; k < lu.rows(); ++k) {
        if (lu(k, k) == Complex{0.0, 0.0} || !std::isfinite(std::abs(lu(k, k)))) {
            lu_.reset();
            throw SolverError("DenseOperator: singular matrix");
        }
    }
}

double DenseOperator::rcond() const { return lu_ ? lu_->rcond() : 0.0; }

VectorXc DenseOperator::solve(const VectorXc& rhs) const {
    if (!lu_) throw SolverError("DenseOperator: solve before factorize");
    return lu_->solve(rhs);
}

MatrixXc DenseOperator::solve(const MatrixXc& rhs) const {
    if (!lu_) throw SolverError("DenseOperator: solve before factorize");
    return lu_->solve(rhs);
}

double DenseOperator::relative_residual(const MatrixXc& x, const MatrixXc& rhs) const {
    double worst = 0.0;
    const MatrixXc r = a_ * x - rhs;
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
        const double scale = rhs.col(c).lpNorm<Eigen::Infinity>();
        const double num = r.col(c).lpNorm<Eigen::Infinity>();
        worst = std::max(worst, scale > 0.0 ? num / scale : num);
    }
    return worst;
}

LatticeGreen::LatticeGreen(const Medium& medium, double cell_size, const Point& origin,
                           const QuadOptions& quad)
    : medium_(medium), h_(cell_size), origin_(origin), quad_(quad) {}

std::pair<int, int> LatticeGreen::global_index(const RegionMesh& mesh, const Cell& cell) const {
    const Point shift = (mesh.origin - origin_) / h_;
    const double si = std::round(shift(0)), sj = std::round(shift(1));
    if (std::abs(mesh.cell_size - h_) > 1e-12 * h_ || std::abs(shift(0) - si) > 1e-9 ||
        std::abs(shift(1) - sj) > 1e-9) {
        throw ConfigError("mesh is not aligned with the lattice");
    }
    return {cell.i + static_cast<int>(si), cell.j + static_cast<int>(sj)};
}

MatrixXc LatticeGreen::matrix(const std::vector<std::pair<int, int>>& rows,
                              const std::vector<std::pair<int, int>>& cols) const {
    const auto n_r = static_cast<Eigen::Index>(rows.size());
    const auto n_c = static_cast<Eigen::Index>(cols.size());
    MatrixXc g(n_r, n_c);
    if (n_r == 0 || n_c == 0) return g;

    auto upper = [&](int j) { return x2(j) > 0.0; };

    int di_max = 0, dj_max = 0;
    int lo_min = 1 << 30, lo_max = -(1 << 30), up_min = 1 << 30, up_max = -(1 << 30);
    for (const auto* set : {&rows, &cols}) {
        for (const auto& [i, j] : *set) {
            if (upper(j)) {
                up_min = std::min(up_min, j);
                up_max = std::max(up_max, j);
            } else {
                lo_min = std::min(lo_min, j);
                lo_max = std::max(lo_max, j);
            }
        }
    }
    int i_min = 1 << 30, i_max = -(1 << 30), j_min = 1 << 30, j_max = -(1 << 30);
    for (const auto* set : {&rows, &cols}) {
        for (const auto& [i, j] : *set) {
            i_min = std::min(i_min, i);
            i_max = std::max(i_max, i);
            j_min = std::min(j_min, j);
            j_max = std::max(j_max, j);
        }
    }
    di_max = i_max - i_min;
    dj_max = j_max - j_min;

    Table2 phi1, phi2, ll, uu;
    Table3 cross;
    phi1.init(0, di_max, 0, dj_max);
    phi2.init(0, di_max, 0, dj_max);
    ll.init(0, di_max, 2 * lo_min, 2 * lo_max);
    uu.init(0, di_max, 2 * up_min, 2 * up_max);
    cross.init(0, di_max, up_min, up_max, lo_min, lo_max);
    const bool layered = medium_.kappa1 != medium_.kappa2;

    for (const auto& [ia, ja] : rows) {
        for (const auto& [ib, jb] : cols) {
            const int di = std::abs(ia - ib), dj = std::abs(ja - jb);
            const bool ua = upper(ja), ub = upper(jb);
            if (ua == ub) {
                (ua ? phi1 : phi2).needed[phi1.at(di, dj)] = 1;
                if (layered) (ua ? uu : ll).needed[(ua ? uu : ll).at(di, ja + jb)] = 1;
            } else {
                cross.needed[cross.at(di, ua ? ja : jb, ua ? jb : ja)] = 1;
            }
        }
    }

    const double h = h_;
    auto phi_entry = [&](const Table2& t, double kappa) {
        return [&t, kappa, h](std::size_t k) {
            const int di = static_cast<int>(k / t.n1), dj = static_cast<int>(k % t.n1);
            if (di == 0 && dj == 0) return fundamental_solution_cell_average(kappa, h);
            return 0.25 * I * hankel1_0(kappa * h * std::hypot(double(di), double(dj)));
        };
    };
    fill_needed(phi1, phi_entry(phi1, medium_.kappa1));
    fill_needed(phi2, phi_entry(phi2, medium_.kappa2));
    auto same_entry = [&](const Table2& t) {
        return [&](std::size_t k) {
            const int di = static_cast<int>(k / t.n1) + t.lo0;
            const int s = static_cast<int>(k % t.n1) + t.lo1;
            const int ja = s / 2 - (s < 0 && s % 2 != 0 ? 1 : 0);
            const int jb = s - ja;
            return green_planar_scattered(Point(di * h, x2(ja)), Point(0.0, x2(jb)), medium_, quad_);
        };
    };
    if (layered) {
        fill_needed(ll, same_entry(ll));
        fill_needed(uu, same_entry(uu));
    }
    fill_needed(cross, [&](std::size_t k) {
        const int jl = static_cast<int>(k % cross.n2) + cross.lo2;
        const std::size_t rest = k / cross.n2;
        const int ju = static_cast<int>(rest % cross.n1) + cross.lo1;
        const int di = static_cast<int>(rest / cross.n1) + cross.lo0;
        return green_planar_scattered(Point(di * h, x2(ju)), Point(0.0, x2(jl)), medium_, quad_);
    });

    parallel_for(n_r, [&](Eigen::Index a) {
        const auto [ia, ja] = rows[a];
        const bool ua = upper(ja);
        for (Eigen::Index b = 0; b < n_c; ++b) {
            const auto [ib, jb] = cols[b];
            const int di = std::abs(ia - ib), dj = std::abs(ja - jb);
            const bool ub = upper(jb);
            if (ua == ub) {
                const Table2& phi = ua ? phi1 : phi2;
                Complex v = phi.values[phi.at(di, dj)];
                if (layered) {
                    const Table2& t = ua ? uu : ll;
                    v += t.values[t.at(di, ja + jb)];
                }
                g(a, b) = v;
            } else {
                g(a, b) = cross.values[cross.at(di, ua ? ja : jb, ua ? jb : ja)];
            }
        }
    });
    return g;
}

DenseOperator assemble_B1_operator(const MatrixXc& k0, const Eigen::VectorXd& w1, double eta) {
    MatrixXc a = eta * (k0 * w1.asDiagonal());
    a.diagonal().array() += 1.0;
    return DenseOperator(std::move(a));
}

DenseOperator assemble_B2_operator(const MatrixXc& kr, const Eigen::VectorXd& w2, double eta) {
    MatrixXc a = -eta * (kr * w2.asDiagonal());
    a.diagonal().array() += 1.0;
    return DenseOperator(std::move(a));
}

namespace {

Point union_origin(const SceneGeometry& scene, double h) {
    const int n = static_cast<int>(std::ceil(scene.arc.R / h));
    return Point(-n * h, -n * h);
}

}  // namespace

NestedGreen::NestedGreen(const SceneGeometry& scene, const Medium& medium, const MeshOptions& mesh,
                         const QuadOptions& quad)
    : scene_(scene),
      medium_(medium),
      quad_(quad),
      b1_(build_region_mesh(RegionTag::B1, scene, mesh.cell_size, mesh.subsample)),
      b2_(build_region_mesh(RegionTag::B2, scene, mesh.cell_size, mesh.subsample)),
      lattice_(medium, mesh.cell_size, union_origin(scene, mesh.cell_size), quad) {
    scene_.validate();
    if (!(medium.kappa1 > 0.0) || !(medium.kappa2 > 0.0))
        throw ConfigError("wavenumbers must be positive");
    eta_ = medium.contrast();
    trivial_ = eta_ == 0.0;

    std::map<std::pair<int, int>, Eigen::Index> index;
    auto add = [&](const RegionMesh& m, std::vector<Eigen::Index>& where) {
        for (const auto& c : m.cells) {
            const auto key = lattice_.global_index(m, c);
            auto it = index.find(key);
            if (it == index.end()) {
                it = index.emplace(key, static_cast<Eigen::Index>(union_cells_.size())).first;
                union_cells_.push_back(key);
                union_centers_.push_back(c.center);
            }
            where.push_back(it->second);
        }
    };
    add(b1_, b1_in_union_);
    add(b2_, b2_in_union_);
    w1_ = b1_.weights();
    w2_ = b2_.weights();
    if (trivial_) return;

    MatrixXc g = lattice_.matrix(union_cells_, union_cells_);
    const bool same = b1_in_union_ == b2_in_union_;
    {
        a1_ = assemble_B1_operator(g(b1_in_union_, b1_in_union_), w1_, eta_);
        a1_.factorize();
    }
    g21_ = same ? g : MatrixXc(g(b2_in_union_, b1_in_union_));
    MatrixXc kr = a1_.solve(MatrixXc(g21_.transpose()));
    kr = (same ? g : MatrixXc(g(b2_in_union_, b2_in_union_))) -
         eta_ * (g21_ * w1_.asDiagonal()) * kr;
    g.resize(0, 0);
    a2_ = assemble_B2_operator(kr, w2_, eta_);
    kr.resize(0, 0);
    a2_.factorize();
}

MatrixXc NestedGreen::planar_rows(const std::vector<Point>& xs) const {
    const auto n_x = static_cast<Eigen::Index>(xs.size());
    const Eigen::Index n_u = union_size();
    MatrixXc rows(n_x, n_u);
    const double h = lattice_.x2(1) - lattice_.x2(0);
    parallel_for(n_x * n_u, [&](Eigen::Index k) {
        const Eigen::Index a = k / n_u, b = k % n_u;
        const Point& c = union_centers_[b];
        if (xs[a] == c) {
            rows(a, b) = fundamental_solution_cell_average(medium_.planar_kappa(c(1)), h) +
                         green_planar_scattered(c, c, medium_, quad_);
        } else {
            rows(a, b) = green_planar_total(xs[a], c, medium_, quad_);
        }
    });
    return rows;
}

MatrixXc NestedGreen::correction_rows(const std::vector<Point>& xs) const {
    if (trivial_) return MatrixXc(static_cast<Eigen::Index>(xs.size()), 0);
    return planar_rows(xs);
}

MatrixXc NestedGreen::planar_incident(const std::vector<SourceSpec>& sources) const {
    const Eigen::Index n_u = union_size();
    const auto n_s = static_cast<Eigen::Index>(sources.size());
    MatrixXc inc(n_u, n_s);
    const double h = lattice_.x2(1) - lattice_.x2(0);
    parallel_for(n_u * n_s, [&](Eigen::Index k) {
        const Eigen::Index s = k / n_u, b = k % n_u;
        const Point& c = union_centers_[b];
        const SourceSpec& src = sources[s];
        if (src.position == c) {
            if (src.kind == SourceKind::dipole)
                throw SingularityError("dipole source at a cell centre");
            inc(b, s) = fundamental_solution_cell_average(medium_.planar_kappa(c(1)), h) +
                        green_planar_scattered(c, c, medium_, quad_);
        } else {
            inc(b, s) = planar_total(src, c, medium_, quad_);
        }
    });
    return inc;
}

MatrixXc NestedGreen::stage2_rhs(const MatrixXc& incident, const MatrixXc& phi) const {
    return MatrixXc(incident(b2_in_union_, Eigen::all)) - eta_ * (g21_ * (w1_.asDiagonal() * phi));
}

NestedSolution NestedGreen::solve(const MatrixXc& incident) const {
    if (incident.rows() != union_size()) throw ConfigError("incident field has wrong length");
    NestedSolution sol;
    const MatrixXc inc1 = incident(b1_in_union_, Eigen::all);
    if (trivial_) {
        sol.phi = inc1;
        sol.u = incident(b2_in_union_, Eigen::all);
        sol.arc_weights = MatrixXc::Zero(b1_.size(), incident.cols());
        sol.rough_weights1 = sol.arc_weights;
        sol.rough_weights2 = MatrixXc::Zero(b2_.size(), incident.cols());
        return sol;
    }
    sol.phi = a1_.solve(inc1);
    sol.u = a2_.solve(stage2_rhs(incident, sol.phi));
    sol.arc_weights = w1_.asDiagonal() * sol.phi;
    sol.rough_weights2 = w2_.asDiagonal() * sol.u;
    // Phi W2 u with Phi = A1^{-1} G(B1, B2) and G(B1, B2) = g21^T
    const MatrixXc z = a1_.solve(MatrixXc(g21_.transpose() * sol.rough_weights2));
    sol.rough_weights1 = w1_.asDiagonal() * (sol.phi + eta_ * z);
    return sol;
}

MatrixXc NestedGreen::arc_correction(const MatrixXc& rows, const NestedSolution& sol) const {
    if (trivial_) return MatrixXc::Zero(rows.rows(), sol.phi.cols());
    return -eta_ * (rows(Eigen::all, b1_in_union_) * sol.arc_weights);
}

MatrixXc NestedGreen::rough_correction(const MatrixXc& rows, const NestedSolution& sol) const {
    if (trivial_) return MatrixXc::Zero(rows.rows(), sol.phi.cols());
    return -eta_ * (rows(Eigen::all, b1_in_union_) * sol.rough_weights1) +
           eta_ * (rows(Eigen::all, b2_in_union_) * sol.rough_weights2);
}

Complex NestedGreen::planar_field(const SourceSpec& src, const Point& x) const {
    return planar_total(src, x, medium_, quad_);
}

Complex NestedGreen::arc_field(const SourceSpec& src, const Point& x) const {
    const Complex u0 = planar_field(src, x);
    if (trivial_) return u0;
    const auto sol = solve(planar_incident({src}));
    return u0 + arc_correction(planar_rows({x}), sol)(0, 0);
}

Complex NestedGreen::rough_field(const SourceSpec& src, const Point& x) const {
    const Complex u0 = planar_field(src, x);
    if (trivial_) return u0;
    const auto sol = solve(planar_incident({src}));
    return u0 + rough_correction(planar_rows({x}), sol)(0, 0);
}

Complex NestedGreen::green_arc(const Point& x, const Point& y) const {
    return arc_field(SourceSpec::monopole(y), x);
}

Complex NestedGreen::green_rough(const Point& x, const Point& y) const {
    return rough_field(SourceSpec::monopole(y), x);
}

double NestedGreen::stage1_residual(const MatrixXc& incident, const NestedSolution& sol) const {
    if (trivial_) return 0.0;
    return a1_.relative_residual(sol.phi, incident(b1_in_union_, Eigen::all));
}

double NestedGreen::stage2_residual(const MatrixXc& incident, const NestedSolution& sol) const {
    if (trivial_) return 0.0;
    return a2_.relative_residual(sol.u, stage2_rhs(incident, sol.phi));
}

}  // namespace lscat
