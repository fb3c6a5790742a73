#include "lscat/forward.hpp"

#include <cmath>

#include "lscat/parallel.hpp"
#include "lscat/specfun.hpp"

namespace lscat {

namespace {

// Rethrow with the pipeline stage prefixed, keeping the error type.
template <class F>
auto staged(const char* stage, F&& body) {
    const auto tag = [&](const std::exception& e) { return std::string(stage) + ": " + e.what(); };
    try {
        return body();
    } catch (const AccuracyError& e) {
        throw AccuracyError(tag(e), e.achieved());
    } catch (const ConfigError& e) {
        throw ConfigError(tag(e));
    } catch (const GeometryError& e) {
        throw GeometryError(tag(e));
    } catch (const DomainError& e) {
        throw DomainError(tag(e));
    } catch (const SingularityError& e) {
        throw SingularityError(tag(e));
    } catch (const SolverError& e) {
        throw SolverError(tag(e));
    }
}

}  // namespace

SceneGeometry SceneConfig::geometry() const {
    SceneGeometry g;
    g.interface = interface;
    g.arc.R = arc_radius > 0.0 ? arc_radius : default_arc_radius(interface);
    return g;
}

void SceneConfig::validate() const {
    if (!(medium.kappa1 > 0.0) || !(medium.kappa2 > 0.0))
        throw ConfigError("wavenumbers must be positive");
    if (arc_radius < 0.0) throw ConfigError("arc radius must be non-negative");
    if (!(mesh.cell_size > 0.0) || mesh.subsample < 1)
        throw ConfigError("mesh needs cell_size > 0 and subsample >= 1");
    if (!(quad.tol > 0.0)) throw ConfigError("quadrature tolerance must be positive");
    const SceneGeometry g = geometry();
    g.validate();
    if (obstacle) {
        if (obstacle->M < 4) throw ConfigError("obstacle needs M >= 4");
        if (!(obstacle->curve.size > 0.0)) throw ConfigError("obstacle size must be positive");
        if (!(obstacle->fd_step > 0.0)) throw ConfigError("fd_step must be positive");
        check_obstacle(obstacle->curve, g);
    }
}

ForwardModel::ForwardModel(const SceneConfig& config) : config_(config) {
    config_.validate();
    geometry_ = config_.geometry();
    green_ = staged("nested volume equations", [&] {
        return std::make_unique<NestedGreen>(geometry_, config_.medium, config_.mesh, config_.quad);
    });
    if (config_.obstacle) {
        obstacle_ = staged("obstacle", [&] {
            return std::make_unique<ObstacleSolver>(*green_, *config_.obstacle);
        });
    }
}

void ForwardModel::check_source(const SourceSpec& src) const {
    const Point& p = src.position;
    if (classify_point(p, geometry_, config_.medium).region != Region::omega1 ||
        p(1) <= interface_clearance)
        throw GeometryError("sources must lie in the upper medium above x2 = 0");
    if (src.kind == SourceKind::dipole && src.ell != 1 && src.ell != 2)
        throw DomainError("dipole direction must be 1 or 2");
}

FieldEvaluator ForwardModel::solve(const std::vector<SourceSpec>& sources) const {
    for (const auto& s : sources) check_source(s);
    return FieldEvaluator(*this, sources);
}

FieldEvaluator::FieldEvaluator(const ForwardModel& model, std::vector<SourceSpec> sources)
    : model_(&model), sources_(std::move(sources)) {
    const NestedGreen& green = model.green();
    nested_ = staged("nested volume equations",
                     [&] { return green.solve(green.planar_incident(sources_)); });
    if (const ObstacleSolver* ob = model.obstacle()) {
        density_ = staged("obstacle", [&] { return ob->solve(background(ob->probe_points())); });
    }
}

MatrixXc FieldEvaluator::planar(const std::vector<Point>& xs, bool scattered_only) const {
    const NestedGreen& green = model_->green();
    const SceneGeometry& g = green.scene();
    const Medium& m = green.medium();
    const auto n_x = static_cast<Eigen::Index>(xs.size());
    const auto n_s = static_cast<Eigen::Index>(sources_.size());
    MatrixXc u(n_x, n_s);
    parallel_for(n_x * n_s, [&](Eigen::Index k) {
        const Eigen::Index a = k % n_x, s = k / n_x;
        const SourceSpec& src = sources_[s];
        const Point& x = xs[a];
        if (!scattered_only || classify_point(x, g, m).region != Region::omega1) {
            u(a, s) = planar_total(src, x, m, green.quad());
        } else if (x(1) > 0.0) {
            // same side as the source: drop Phi_kappa1 analytically, finite at x = xs
            u(a, s) = src.kind == SourceKind::monopole
                          ? green_planar_scattered(x, src.position, m, green.quad())
                          : dipole_planar_scattered(x, src.position, src.ell, m, green.quad());
        } else {
            u(a, s) = planar_total(src, x, m, green.quad()) - free_space_field(src, x, m.kappa1);
        }
    });
    return u;
}

MatrixXc FieldEvaluator::corrections(const std::vector<Point>& xs, bool with_obstacle) const {
    const NestedGreen& green = model_->green();
    const ObstacleSolver* ob = with_obstacle ? model_->obstacle() : nullptr;
    const auto n_x = static_cast<Eigen::Index>(xs.size());
    const auto n_s = static_cast<Eigen::Index>(sources_.size());
    if (green.trivial() && !ob) return MatrixXc::Zero(n_x, n_s);
    const MatrixXc rows = green.correction_rows(xs);
    MatrixXc c = green.rough_correction(rows, nested_);
    if (ob) c += ob->potential(xs, rows) * density_;
    return c;
}

MatrixXc FieldEvaluator::background(const std::vector<Point>& xs) const {
    return planar(xs, false) + corrections(xs, false);
}

MatrixXc FieldEvaluator::total(const std::vector<Point>& xs) const {
    return planar(xs, false) + corrections(xs, true);
}

MatrixXc FieldEvaluator::incident(const std::vector<Point>& xs) const {
    const double kappa1 = model_->config().medium.kappa1;
    MatrixXc u(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(sources_.size()));
    for (Eigen::Index s = 0; s < u.cols(); ++s)
        for (Eigen::Index a = 0; a < u.rows(); ++a)
            u(a, s) = free_space_field(sources_[s], xs[a], kappa1);
    return u;
}

MatrixXc FieldEvaluator::scattered(const std::vector<Point>& xs) const {
    return planar(xs, true) + corrections(xs, true);
}

std::vector<NearFieldRecord> synthesize_dataset(const ForwardModel& model,
                                                const std::vector<Point>& sources,
                                                const std::vector<Point>& receivers) {
    const SceneGeometry& g = model.green().scene();
    for (const Point& r : receivers)
        if (classify_point(r, g, model.config().medium).region != Region::omega1)
            throw GeometryError("receivers must lie in the upper medium");
    std::vector<SourceSpec> specs;
    for (const Point& p : sources) specs.push_back(SourceSpec::monopole(p));
    const MatrixXc us = model.solve(specs).scattered(receivers);
    std::vector<NearFieldRecord> out;
    out.reserve(sources.size() * receivers.size());
    for (std::size_t s = 0; s < sources.size(); ++s)
        for (std::size_t a = 0; a < receivers.size(); ++a)
            out.push_back({static_cast<int>(s), sources[s], receivers[a],
                           us(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(s))});
    return out;
}

BlowupResult blowup_experiment(const InterfaceProfile& interface, const Medium& medium,
                               const BlowupConfig& cfg) {
    if (!(cfg.delta0 > 0.0) || !(cfg.eps0 > 0.0))
        throw ConfigError("delta0 and eps0 must be positive");
    if (!(cfg.delta0 < cfg.eps0)) throw ConfigError("z_n must stay inside B_eps0: need delta0 < eps0");
    if (cfg.n_max < 1) throw ConfigError("n_max must be at least 1");
    if (cfg.radial_cells < 2 || cfg.angular_cells < 8 || !(cfg.inner_fraction > 0.0))
        throw ConfigError("blow-up sample mesh is too coarse");

    BlowupResult res;
    res.z_star = Point(cfg.z_star_x1, interface.f(cfg.z_star_x1));
    res.normal = interface.normal(cfg.z_star_x1);

    const double r0 = cfg.inner_fraction * cfg.delta0 / cfg.n_max;
    const double q = std::log(cfg.eps0 / r0) / cfg.radial_cells;
    const double dtheta = 2.0 * pi / cfg.angular_cells;
    std::vector<Point> pts;
    std::vector<double> wts, size;
    for (int k = 0; k < cfg.radial_cells; ++k) {
        const double ra = r0 * std::exp(q * k), rb = r0 * std::exp(q * (k + 1));
        const double rm = 0.5 * (ra + rb);
        for (int m = 0; m < cfg.angular_cells; ++m) {
            const double th = (m + 0.5) * dtheta;
            const Point y = res.z_star + rm * Point(std::cos(th), std::sin(th));
            if (!(y(1) < interface.f(y(0)))) continue;
            if (cfg.second_interface && !(y(1) > cfg.second_interface->f(y(0)))) continue;
            pts.push_back(y);
            wts.push_back(rm * (rb - ra) * dtheta);
            size.push_back(std::max(rb - ra, rm * dtheta));
        }
    }
    if (pts.empty()) throw GeometryError("blow-up sample region is empty");

    const auto n_pts = static_cast<Eigen::Index>(pts.size());
    std::vector<double> terms(pts.size());
    for (int n = 1; n <= cfg.n_max; ++n) {
        const Point zn = res.z_star + (cfg.delta0 / n) * res.normal;
        parallel_for(n_pts, [&](Eigen::Index k) {
            const Complex g = res.normal(0) * fundamental_solution_grad(medium.kappa1, pts[k], zn, 1) +
                              res.normal(1) * fundamental_solution_grad(medium.kappa1, pts[k], zn, 2);
            terms[k] = std::norm(g) * wts[k];
            if ((pts[k] - zn).norm() < 2.0 * size[k]) terms[k] = -terms[k];
        });
        double sum = 0.0;
        for (double t : terms) {
            if (t < 0.0) res.resolution_warning = true;
            sum += std::abs(t);
        }
        res.n.push_back(n);
        res.norm.push_back(sum);
    }

    const int first = cfg.n_max >= 9 ? 8 : 1;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int cnt = 0;
    for (int n = first; n <= cfg.n_max; ++n) {
        const double x = std::log(double(n)), y = std::log(res.norm[n - 1]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    const double den = cnt * sxx - sx * sx;
    res.exponent = den > 0.0 ? (cnt * sxy - sx * sy) / den : 0.0;
    res.divergence_ratio = cfg.n_max >= 4 ? res.norm.back() / res.norm[3] : std::nan("");
    return res;
}

MixedReciprocity mixed_reciprocity_check(const ForwardModel& model, const Point& xs1,
                                         const Point& xs2, int ell, double eps, double fd_step) {
    if (ell != 1 && ell != 2) throw DomainError("dipole direction must be 1 or 2");
    if (!(eps > 0.0) || !(fd_step > 0.0) || !(fd_step < 0.5 * eps))
        throw ConfigError("need eps > 0 and 0 < fd_step < eps / 2");
    if (!(2.0 * eps < (xs1 - xs2).norm())) throw GeometryError("eps too large: ball reaches xs1");
    const SceneGeometry& g = model.green().scene();
    const Medium& medium = model.config().medium;

    const int m = 64;
    std::vector<Point> pts, nus;
    for (int k = 0; k < m; ++k) {
        const double t = 2.0 * pi * k / m;
        const Point out(std::cos(t), std::sin(t));
        const Point y = xs2 + eps * out;
        for (const Point& p : {y, Point(y - fd_step * out), Point(y + fd_step * out)}) {
            if (classify_point(p, g, medium).region != Region::omega1 || p(1) <= interface_clearance)
                throw GeometryError("eps too large: ball around xs2 meets the interface");
        }
        pts.push_back(y);
        pts.push_back(y - fd_step * out);
        pts.push_back(y + fd_step * out);
        nus.push_back(-out);
    }

    const MatrixXc u = model.solve({SourceSpec::monopole(xs1)}).total(pts);
    const Complex lhs = model.solve({SourceSpec::dipole(xs2, ell)}).total({xs1})(0, 0);

    const double kappa = medium.kappa1;
    Complex rhs{0.0, 0.0};
    for (int k = 0; k < m; ++k) {
        const Point& y = pts[3 * k];
        const Point& nu = nus[k];
        // u~inc(y) = d/dx_ell Phi(y, xs2); its normal derivative from the Hessian
        const Complex v = fundamental_solution_grad(kappa, y, xs2, ell);
        const Complex dv = nu(0) * fundamental_solution_hessian(kappa, y, xs2, 1, ell) +
                           nu(1) * fundamental_solution_hessian(kappa, y, xs2, 2, ell);
        const Complex du = (u(3 * k + 1, 0) - u(3 * k + 2, 0)) / (2.0 * fd_step);
        rhs += dv * u(3 * k, 0) - du * v;
    }
    rhs *= 2.0 * pi * eps / m;
    return {lhs, rhs, std::abs(lhs - rhs) / std::abs(lhs)};
}

}  // namespace lscat
