#include "lscat/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace lscat {

namespace {

constexpr int gl_order = 15;

struct GaussRule {
    std::array<double, gl_order> nodes;
    std::array<double, gl_order> weights;
};

// Newton iteration on P_n, nodes on [-1, 1].
GaussRule make_gauss_legendre() {
    GaussRule rule{};
    const int n = gl_order;
    for (int i = 0; i < n; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        rule.nodes[i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return rule;
}

const GaussRule& gauss_rule() {
    static const GaussRule rule = make_gauss_legendre();
    return rule;
}

// Change of variables on a panel.
enum class MapKind { linear, sine, cosh };

struct PanelMap {
    MapKind kind = MapKind::linear;
    double kappa = 1.0;

    double xi(double t) const {
        switch (kind) {
            case MapKind::sine: return kappa * std::sin(t);
            case MapKind::cosh: return kappa * std::cosh(t);
            default: return t;
        }
    }
    double jacobian(double t) const {
        switch (kind) {
            case MapKind::sine: return kappa * std::cos(t);
            case MapKind::cosh: return kappa * std::sinh(t);
            default: return 1.0;
        }
    }
};

struct Panel {
    PanelMap map;
    double ta = 0.0, tb = 0.0;
    Complex left, right;
    Complex value;
    double err = 0.0;
};

Complex gauss_panel(const std::function<Complex(double)>& f, const PanelMap& map, double ta,
                    double tb) {
    const auto& rule = gauss_rule();
    const double mid = 0.5 * (ta + tb), half = 0.5 * (tb - ta);
    Complex sum{0.0, 0.0};
    for (int i = 0; i < gl_order; ++i) {
        const double t = mid + half * rule.nodes[i];
        sum += rule.weights[i] * f(map.xi(t)) * map.jacobian(t);
    }
    return half * sum;
}

Panel make_panel(const std::function<Complex(double)>& f, const PanelMap& map, double ta,
                 double tb, const Complex& whole) {
    Panel p;
    p.map = map;
    p.ta = ta;
    p.tb = tb;
    const double mid = 0.5 * (ta + tb);
    p.left = gauss_panel(f, map, ta, mid);
    p.right = gauss_panel(f, map, mid, tb);
    p.value = p.left + p.right;
    p.err = std::abs(whole - p.value);
    return p;
}

Panel make_panel(const std::function<Complex(double)>& f, const PanelMap& map, double ta,
                 double tb) {
    return make_panel(f, map, ta, tb, gauss_panel(f, map, ta, tb));
}

bool splittable(const Panel& p) {
    const double scale = std::max({std::abs(p.ta), std::abs(p.tb), 1e-300});
    return (p.tb - p.ta) > 64.0 * std::numeric_limits<double>::epsilon() * scale;
}

// Global adaptive bisection: always split the panel with the largest error
// estimate until the summed estimate drops below `budget`.
QuadResult refine(const std::function<Complex(double)>& f, std::vector<Panel> panels,
                  double budget, double extra_error, const QuadOptions& opts) {
    using Entry = std::pair<double, std::size_t>;
    auto cmp = [](const Entry& a, const Entry& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second > b.second;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
    double total = 0.0;
    double frozen = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        total += panels[i].err;
        heap.push({panels[i].err, i});
    }

    auto exact_total = [&]() {
        double s = frozen;
        for (const auto& p : panels) s += p.err;
        return s;
    };

    while (true) {
        if (total <= budget) {
            total = exact_total();
            if (total <= budget) break;
        }
        if (heap.empty() || static_cast<int>(panels.size()) >= opts.max_panels) {
            throw AccuracyError("integrate_halfline: panel budget exhausted", total + extra_error);
        }
        const auto [err, idx] = heap.top();
        heap.pop();
        Panel& parent = panels[idx];
        if (!splittable(parent)) {
            // accept as is; its error can no longer be reduced
            continue;
        }
        const double mid = 0.5 * (parent.ta + parent.tb);
        Panel lhs = make_panel(f, parent.map, parent.ta, mid, parent.left);
        Panel rhs = make_panel(f, parent.map, mid, parent.tb, parent.right);
        total += lhs.err + rhs.err - parent.err;
        panels[idx] = lhs;
        heap.push({lhs.err, idx});
        panels.push_back(rhs);
        heap.push({rhs.err, panels.size() - 1});
    }

    QuadResult result;
    result.value = Complex{0.0, 0.0};
    for (const auto& p : panels) result.value += p.value;
    result.error = total + extra_error;
    result.panels = static_cast<int>(panels.size());
    return result;
}

double tail_factor(const DecayClass& decay, double xi) {
    double factor = std::numeric_limits<double>::infinity();
    if (decay.rate > 0.0 && decay.power >= 0.0) factor = std::min(factor, 1.0 / decay.rate);
    if (decay.power > 1.0) factor = std::min(factor, xi / (decay.power - 1.0));
    return factor;
}

}  // namespace

QuadResult integrate_halfline(const IntegrandSpec& spec, const QuadOptions& opts) {
    const auto& f = spec.evaluator;
    auto envelope = [&](double xi) {
        return spec.envelope ? spec.envelope(xi) : std::abs(f(xi));
    };

    std::vector<double> bps;
    for (double b : spec.breakpoints)
        if (b > 0.0) bps.push_back(b);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    std::vector<Panel> panels;
    double start = 0.0;
    for (std::size_t i = 0; i < bps.size(); ++i) {
        const double k = bps[i];
        // approach k from below with xi = k sin t
        const PanelMap below{MapKind::sine, k};
        panels.push_back(make_panel(f, below, std::asin(std::clamp(start / k, 0.0, 1.0)), 0.5 * pi));
        // leave k upward with xi = k cosh t
        const double stop = (i + 1 < bps.size()) ? 0.5 * (k + bps[i + 1]) : 1.5 * k;
        const PanelMap above{MapKind::cosh, k};
        panels.push_back(make_panel(f, above, 0.0, std::acosh(stop / k)));
        start = stop;
    }

    // tail: linear panels of doubling length until the envelope bound is small
    double xi = bps.empty() ? 0.0 : start;
    double length = bps.empty() ? 1.0 : start;
    const PanelMap linear{};
    double tail = std::numeric_limits<double>::infinity();
    const double tail_goal = 0.25 * opts.tol;
    int tail_panels = 0;
    while (true) {
        if (xi > 0.0) {
            const double env = envelope(xi);
            tail = env == 0.0 ? 0.0 : env * tail_factor(spec.decay, xi);
            if (tail <= tail_goal && envelope(xi + length) <= env) break;
        }
        panels.push_back(make_panel(f, linear, xi, xi + length));
        xi += length;
        length *= 2.0;
        if (++tail_panels > 200 || !std::isfinite(xi)) {
            throw AccuracyError("integrate_halfline: tail does not decay", tail);
        }
    }
    if (!std::isfinite(tail)) tail = 0.0;
    return refine(f, std::move(panels), opts.tol - tail, tail, opts);
}

QuadResult integrate_interval(const std::function<Complex(double)>& f, double a, double b,
                              const QuadOptions& opts) {
    std::vector<Panel> panels;
    panels.push_back(make_panel(f, PanelMap{}, a, b));
    return refine(f, std::move(panels), opts.tol, 0.0, opts);
}

IntegrandSpec fold_even_odd(std::function<Complex(double)> kernel, Parity parity, double d,
                            std::vector<double> breakpoints, DecayClass decay,
                            std::function<double(double)> kernel_envelope) {
    IntegrandSpec spec;
    spec.breakpoints = std::move(breakpoints);
    spec.decay = decay;
    if (parity == Parity::odd && d == 0.0) {
        spec.evaluator = [](double) { return Complex{0.0, 0.0}; };
        spec.envelope = [](double) { return 0.0; };
        return spec;
    }
    if (parity == Parity::even) {
        spec.evaluator = [kernel, d](double xi) { return 2.0 * kernel(xi) * std::cos(xi * d); };
    } else {
        spec.evaluator = [kernel, d](double xi) {
            return 2.0 * I * kernel(xi) * std::sin(xi * d);
        };
    }
    if (kernel_envelope) {
        spec.envelope = [kernel_envelope](double xi) { return 2.0 * kernel_envelope(xi); };
    } else {
        spec.envelope = [kernel](double xi) { return 2.0 * std::abs(kernel(xi)); };
    }
    return spec;
}

}  // namespace lscat
