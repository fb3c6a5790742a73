#include "lscat/obstacle.hpp"

#include <cmath>

#include "lscat/parallel.hpp"
#include "lscat/specfun.hpp"

namespace lscat {

namespace {

// log(4 sin^2((t - tau)/2)) split of the three free-space kernels at one pair.
struct KernelParts {
    Complex s1, s2, k1, k2, kp1, kp2;
};

KernelParts kernel_parts(const Point& x, const Point& dxt, const Point& ddxt, const Point& y,
                         const Point& dyt, double kappa, double t, double tau) {
    const double jac_x = dxt.norm(), jac_y = dyt.norm();
    const double diff = std::remainder(t - tau, 2.0 * pi);
    KernelParts p{};
    if (diff == 0.0) {
        const double curv = (dxt(0) * ddxt(1) - dxt(1) * ddxt(0)) / (jac_x * jac_x);
        p.s1 = -jac_x / (2.0 * pi);
        p.s2 = (0.5 * I - euler_gamma / pi - std::log(0.5 * kappa * jac_x) / pi) * jac_x;
        p.k1 = 0.0;
        p.k2 = -curv / (2.0 * pi);
        p.kp1 = 0.0;
        p.kp2 = p.k2;
        return p;
    }
    const Point d = x - y;
    const double r = d.norm();
    const auto b = bessel_j0j1_y0y1(kappa * r);
    const Complex h0(b.j0, b.y0), h1(b.j1, b.y1);
    const double logw = std::log(4.0 * std::sin(0.5 * diff) * std::sin(0.5 * diff));
    // n(tau) = (x2', -x1'), unnormalised
    const double g = d(0) * dyt(1) - d(1) * dyt(0);
    const double gp = (d(0) * dxt(1) - d(1) * dxt(0)) * jac_y / jac_x;

    const Complex s = 0.5 * I * h0 * jac_y;
    p.s1 = -b.j0 * jac_y / (2.0 * pi);
    p.s2 = s - p.s1 * logw;

    const Complex k = 0.5 * I * kappa * h1 / r * g;
    p.k1 = -kappa / (2.0 * pi) * b.j1 / r * g;
    p.k2 = k - p.k1 * logw;

    const Complex kp = -0.5 * I * kappa * h1 / r * gp;
    p.kp1 = kappa / (2.0 * pi) * b.j1 / r * gp;
    p.kp2 = kp - p.kp1 * logw;
    return p;
}

}  // namespace

Eigen::VectorXd kress_weights(int M, double t) {
    const int n = 2 * M;
    Eigen::VectorXd w(n);
    for (int j = 0; j < n; ++j) {
        const double s = t - j * pi / M;
        double sum = 0.0;
        for (int m = 1; m < M; ++m) sum += std::cos(m * s) / m;
        w(j) = -2.0 * pi / M * sum - pi / (double(M) * M) * std::cos(M * s);
    }
    return w;
}

Complex trig_interpolate(const VectorXc& values, double t) {
    const auto n = values.size();
    const int M = static_cast<int>(n / 2);
    Complex sum{0.0, 0.0};
    for (Eigen::Index j = 0; j < n; ++j) {
        const double s = std::remainder(t - j * pi / M, 2.0 * pi);
        const double kernel = s == 0.0 ? 1.0 : std::sin(M * s) / std::tan(0.5 * s) / n;
        sum += kernel * values(j);
    }
    return sum;
}

BoundaryMatrices free_space_boundary_matrices(const ObstacleCurve& curve, const CurveNodes& nodes,
                                              double kappa, const std::vector<double>& ts) {
    const auto n_t = static_cast<Eigen::Index>(ts.size());
    const Eigen::Index n = nodes.size();
    const double trap = pi / nodes.M;
    BoundaryMatrices m{MatrixXc(n_t, n), MatrixXc(n_t, n), MatrixXc(n_t, n)};
    parallel_for(n_t, [&](Eigen::Index i) {
        const double t = ts[i];
        const Point x = curve.x(t), dxt = curve.dx(t), ddxt = curve.ddx(t);
        const Eigen::VectorXd r = kress_weights(nodes.M, t);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto p = kernel_parts(x, dxt, ddxt, nodes.x.col(j), nodes.dx.col(j), kappa, t,
                                        nodes.t(j));
            m.S(i, j) = r(j) * p.s1 + trap * p.s2;
            m.K(i, j) = r(j) * p.k1 + trap * p.k2;
            m.Kp(i, j) = r(j) * p.kp1 + trap * p.kp2;
        }
    });
    return m;
}

ObstacleSolver::ObstacleSolver(const NestedGreen& green, const ObstacleSpec& spec)
    : green_(&green), spec_(spec), kappa_(green.medium().kappa2) {
    check_obstacle(spec_.curve, green.scene());
    if (spec_.kind == BoundaryKind::neumann) spec_.lambda = 0.0;
    if (spec_.lambda < 0.0) throw ConfigError("impedance lambda must be non-negative");
    if (spec_.kind == BoundaryKind::penetrable) {
        if (!(spec_.index.real() > 0.0) || spec_.index.imag() < 0.0)
            throw ConfigError("refractive index requires Re n > 0 and Im n >= 0");
        mesh_ = build_obstacle_mesh(spec_.curve, spec_.mesh.cell_size, spec_.mesh.subsample);
        for (const auto& c : mesh_.cells) probes_.push_back(c.center);
        const Complex m = 1.0 - spec_.index;
        contrast_weights_ = (kappa_ * kappa_ * m) * mesh_.weights().cast<Complex>();

        const LatticeGreen local(green.medium(), mesh_.cell_size, mesh_.origin, green.quad());
        std::vector<std::pair<int, int>> idx;
        for (const auto& c : mesh_.cells) idx.emplace_back(c.i, c.j);
        MatrixXc g = local.matrix(idx, idx);
        if (!green.trivial()) {
            const MatrixXc rows = green.correction_rows(probes_);
            probe_solution_ = green.solve(rows.transpose());
            g += green.rough_correction(rows, probe_solution_);
        }
        MatrixXc a = g * contrast_weights_.asDiagonal();
        a.diagonal().array() += 1.0;
        system_ = DenseOperator(std::move(a));
        system_.factorize();
        return;
    }

    nodes_ = obstacle_nodes(spec_.curve, spec_.M);
    delta_ = spec_.fd_step * spec_.curve.diameter();
    const Eigen::Index n = nodes_.size();
    probes_.resize(3 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Point y = nodes_.x.col(j), nu = nodes_.normal.col(j);
        probes_[j] = y;
        probes_[n + j] = y + delta_ * nu;
        probes_[2 * n + j] = y - delta_ * nu;
    }
    MatrixXc rows;
    if (!green.trivial()) {
        rows = green.correction_rows(probes_);
        probe_solution_ = green.solve(rows.transpose());
    }

    std::vector<Point> xs(probes_.begin(), probes_.begin() + n);
    std::vector<double> ts(nodes_.t.data(), nodes_.t.data() + n);
    const MatrixXc rem = remainder(xs, green.trivial() ? MatrixXc(n, 0) : MatrixXc(rows.topRows(n)));
    const BoundaryMatrices free = free_space_boundary_matrices(spec_.curve, nodes_, kappa_, ts);

    const double trap2 = 2.0 * pi / nodes_.M;
    MatrixXc s = free.S, k = free.K, kp = free.Kp;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double wj = trap2 * nodes_.jacobian(j);
            s(i, j) += wj * rem(i, j);
            k(i, j) += wj * (rem(i, n + j) - rem(i, 2 * n + j)) / (2.0 * delta_);
            // d/dnu(x) of the symmetric remainder via the source-side difference at (j, i)
            kp(i, j) += wj * (rem(j, n + i) - rem(j, 2 * n + i)) / (2.0 * delta_);
        }
    }
    MatrixXc a;
    if (spec_.kind == BoundaryKind::sound_soft) {
        a = k - I * s;
    } else {
        a = -kp - (I * spec_.lambda) * s;
    }
    a.diagonal().array() += 1.0;
    system_ = DenseOperator(std::move(a));
    system_.factorize();
}

MatrixXc ObstacleSolver::remainder(const std::vector<Point>& xs, const MatrixXc& rows) const {
    const auto n_x = static_cast<Eigen::Index>(xs.size());
    const auto n_p = static_cast<Eigen::Index>(probes_.size());
    MatrixXc rem(n_x, n_p);
    const Medium& medium = green_->medium();
    const QuadOptions& quad = green_->quad();
    parallel_for(n_x * n_p, [&](Eigen::Index k) {
        const Eigen::Index a = k / n_p, b = k % n_p;
        rem(a, b) = green_planar_scattered(xs[a], probes_[b], medium, quad);
    });
    if (!green_->trivial()) rem += green_->rough_correction(rows, probe_solution_);
    return rem;
}

MatrixXc ObstacleSolver::rhs(const MatrixXc& incident) const {
    if (incident.rows() != static_cast<Eigen::Index>(probes_.size()))
        throw ConfigError("incident field must be sampled at the probe points");
    if (spec_.kind == BoundaryKind::penetrable) return incident;
    const Eigen::Index n = nodes_.size();
    if (spec_.kind == BoundaryKind::sound_soft) return -2.0 * incident.topRows(n);
    const MatrixXc dnu = (incident.middleRows(n, n) - incident.bottomRows(n)) / (2.0 * delta_);
    return 2.0 * (dnu + (I * spec_.lambda) * incident.topRows(n));
}

MatrixXc ObstacleSolver::solve(const MatrixXc& incident) const { return system_.solve(rhs(incident)); }

MatrixXc ObstacleSolver::potential(const std::vector<Point>& xs, const MatrixXc& rows) const {
    const auto n_x = static_cast<Eigen::Index>(xs.size());
    const Medium& medium = green_->medium();
    const QuadOptions& quad = green_->quad();

    if (spec_.kind == BoundaryKind::penetrable) {
        const Eigen::Index n_d = mesh_.size();
        MatrixXc g(n_x, n_d);
        const double h = mesh_.cell_size;
        parallel_for(n_x * n_d, [&](Eigen::Index k) {
            const Eigen::Index a = k / n_d, b = k % n_d;
            const Point& c = mesh_.cells[b].center;
            if (xs[a] == c) {
                g(a, b) = fundamental_solution_cell_average(kappa_, h) +
                          green_planar_scattered(c, c, medium, quad);
            } else {
                g(a, b) = green_planar_total(xs[a], c, medium, quad);
            }
        });
        if (!green_->trivial()) g += green_->rough_correction(rows, probe_solution_);
        return -(g * contrast_weights_.asDiagonal());
    }

    const Eigen::Index n = nodes_.size();
    const MatrixXc rem = remainder(xs, rows);
    MatrixXc p(n_x, n);
    const double trap = pi / nodes_.M;
    for (Eigen::Index a = 0; a < n_x; ++a) {
        const bool lower = xs[a](1) < 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const Point y = nodes_.x.col(j);
            Complex g = rem(a, j);
            if (lower) g += fundamental_solution(kappa_, xs[a], y);
            const double wj = trap * nodes_.jacobian(j);
            if (spec_.kind == BoundaryKind::sound_soft) {
                Complex dg = (rem(a, n + j) - rem(a, 2 * n + j)) / (2.0 * delta_);
                if (lower) {
                    // grad_y Phi(x, y) = -grad_x Phi(x, y)
                    const Point nu = nodes_.normal.col(j);
                    dg -= nu(0) * fundamental_solution_grad(kappa_, xs[a], y, 1) +
                          nu(1) * fundamental_solution_grad(kappa_, xs[a], y, 2);
                }
                p(a, j) = wj * (dg - I * g);
            } else {
                p(a, j) = wj * g;
            }
        }
    }
    return p;
}

std::vector<Point> ObstacleSolver::trace_points(const std::vector<double>& ts) const {
    std::vector<Point> pts;
    pts.reserve(3 * ts.size());
    for (double t : ts) {
        const Point x = spec_.curve.x(t), d = spec_.curve.dx(t);
        const Point nu = Point(d(1), -d(0)) / d.norm();
        pts.push_back(x);
        pts.push_back(x + delta_ * nu);
        pts.push_back(x - delta_ * nu);
    }
    return pts;
}

MatrixXc ObstacleSolver::boundary_residual(const std::vector<double>& ts, const MatrixXc& density,
                                           const MatrixXc& incident) const {
    if (spec_.kind == BoundaryKind::penetrable)
        throw ConfigError("boundary residual is defined for impenetrable obstacles only");
    const auto n_t = static_cast<Eigen::Index>(ts.size());
    const Eigen::Index n = nodes_.size();
    const std::vector<Point> pts = trace_points(ts);
    const MatrixXc rem = remainder(pts, green_->correction_rows(pts));
    const BoundaryMatrices free = free_space_boundary_matrices(spec_.curve, nodes_, kappa_, ts);
    const double trap2 = 2.0 * pi / nodes_.M;

    MatrixXc res(n_t, density.cols());
    for (Eigen::Index i = 0; i < n_t; ++i) {
        Eigen::RowVectorXcd s = free.S.row(i), k = free.K.row(i), kp = free.Kp.row(i);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double wj = trap2 * nodes_.jacobian(j);
            s(j) += wj * rem(3 * i, j);
            k(j) += wj * (rem(3 * i, n + j) - rem(3 * i, 2 * n + j)) / (2.0 * delta_);
            kp(j) += wj * (rem(3 * i + 1, j) - rem(3 * i + 2, j)) / (2.0 * delta_);
        }
        for (Eigen::Index c = 0; c < density.cols(); ++c) {
            const VectorXc psi = density.col(c);
            const Complex psi_t = trig_interpolate(psi, ts[i]);
            const Complex u = incident(3 * i, c);
            if (spec_.kind == BoundaryKind::sound_soft) {
                res(i, c) = u + 0.5 * (psi_t + (k * psi)(0) - I * (s * psi)(0));
            } else {
                const Complex dnu_u = (incident(3 * i + 1, c) - incident(3 * i + 2, c)) / (2.0 * delta_);
                const Complex w = 0.5 * (s * psi)(0);
                const Complex dnu_w = 0.5 * (-psi_t + (kp * psi)(0));
                res(i, c) = dnu_u + dnu_w + I * spec_.lambda * (u + w);
            }
        }
    }
    return res;
}

}  // namespace lscat
