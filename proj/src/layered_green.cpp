#include "lscat/layered_green.hpp"

#include <atomic>
#include <cmath>

#include "lscat/specfun.hpp"

namespace lscat {

namespace {

std::atomic<bool> g_branch_flip{false};

enum class Sides { upper_upper, lower_upper, upper_lower, lower_lower };

Sides classify(const Point& x, const Point& xs) {
    if (std::abs(x(1)) < interface_clearance || std::abs(xs(1)) < interface_clearance) {
        throw GeometryError("planar Green's function evaluated on the interface x2 = 0");
    }
    const bool xu = x(1) > 0.0, su = xs(1) > 0.0;
    if (xu && su) return Sides::upper_upper;
    if (!xu && su) return Sides::lower_upper;
    if (xu && !su) return Sides::upper_lower;
    return Sides::lower_lower;
}

bool same_side(Sides s) { return s == Sides::upper_upper || s == Sides::lower_lower; }

// Reflection coefficient (b1 - b2)/(b1 + b2) written as (k1^2 - k2^2)/(b1 + b2)^2.
Complex reflection(const Complex& b1, const Complex& b2, double k1sq_minus_k2sq) {
    if (k1sq_minus_k2sq == 0.0) return {0.0, 0.0};
    const Complex sum = b1 + b2;
    return k1sq_minus_k2sq / (sum * sum);
}

// Which Fourier integral: monopole, dipole ell = 1, dipole ell = 2.
enum class Family { monopole, dipole1, dipole2 };

Complex planar_integral(Family family, const Point& x, const Point& xs, const Medium& m,
                        const QuadOptions& opts) {
    const Sides sides = classify(x, xs);
    const double k1 = m.kappa1, k2 = m.kappa2;
    const double dk = k1 * k1 - k2 * k2;
    if (same_side(sides) && dk == 0.0) return {0.0, 0.0};

    const double d = x(0) - xs(0);
    const double x2 = x(1), s2 = xs(1);
    const double rate = std::abs(x2) + std::abs(s2);

    std::function<Complex(double)> kernel;
    double prefactor = 0.0;  // real part of the prefactor; imaginary unit handled below
    bool imaginary_prefactor = false;
    double power = 0.0;

    switch (sides) {
        case Sides::upper_upper: {
            const double s = x2 + s2;
            switch (family) {
                case Family::monopole:
                    kernel = [=](double xi) {
                        const Complex b1 = beta(xi, k1), b2 = beta(xi, k2);
                        return reflection(b1, b2, dk) / b1 * std::exp(I * b1 * s);
                    };
                    prefactor = 1.0 / (4.0 * pi);
                    imaginary_prefactor = true;
                    power = 3.0;
                    break;
                case Family::dipole1:
                    kernel = [=](double xi) {
                        const Complex b1 = beta(xi, k1), b2 = beta(xi, k2);
                        return xi * reflection(b1, b2, dk) / b1 * std::exp(I * b1 * s);
                    };
                    prefactor = -1.0 / (4.0 * pi);
                    power = 2.0;
                    break;
                case Family::dipole2:
                    kernel = [=](double xi) {
                        const Complex b1 = beta(xi, k1), b2 = beta(xi, k2);
                        return reflection(b1, b2, dk) * std::exp(I * b1 * s);
                    };
                    prefactor = 1.0 / (4.0 * pi);
                    power = 2.0;
                    break;
            }
            break;
        }
        case Sides::lower_lower: {
            const double s = x2 + s2;
            // (b2 - b1)/(b1 + b2) = -reflection
            switch (family) {
                case Family::monopole:
                    kernel = [=](double xi) {
                        const Complex b1 = beta(xi, k1), b2 = beta(xi, k2);
                        return -reflection(b1, b2, dk) / b2 * std::exp(-I * b2 * s);
                    };
                    prefactor = 1.0 / (4.0 * pi);
                    imaginary_prefactor = true;
                    power = 3.0;
                    break;
                case Family::dipole1:
                    kernel = [=](double xi) {
                        const Complex b1 = beta(xi, k1), b2 = beta(xi, k2);
                        return -xi * reflection(b1, b2, dk) / b2 * std::exp(-I * b2 * s);
                    };
                    prefactor = -1.0 / (4.0 * pi);
                    power = 2.0;
                    break;
                case Family::dipole2:
                    kernel = [=](double xi) {
                        const Complex b1 = beta(xi, k1), b2 = beta(xi, k2);
                        return -reflection(b1, b2, dk) * std::exp(-I * b2 * s);
                    };
                    prefactor = -1.0 / (4.0 * pi);
                    power = 2.0;
                    break;
            }
            break;
        }
        case Sides::lower_upper:
        case Sides::upper_lower: {
            // lower_upper: exp(i(b1 xs2 - b2 x2)); upper_lower: exp(i(b1 x2 - b2 xs2))
            const double up = sides == Sides::lower_upper ? s2 : x2;
            const double low = sides == Sides::lower_upper ? x2 : s2;
            auto phase = [=](const Complex& b1, const Complex& b2) {
                return std::exp(I * (b1 * up - b2 * low));
            };
            switch (family) {
                case Family::monopole:
                    kernel = [=](double xi) {
                        const Complex b1 = beta(xi, k1), b2 = beta(xi, k2);
                        return phase(b1, b2) / (b1 + b2);
                    };
                    prefactor = 1.0 / (2.0 * pi);
                    imaginary_prefactor = true;
                    power = 1.0;
                    break;
                case Family::dipole1:
                    kernel = [=](double xi) {
                        const Complex b1 = beta(xi, k1), b2 = beta(xi, k2);
                        return xi * phase(b1, b2) / (b1 + b2);
                    };
                    prefactor = -1.0 / (2.0 * pi);
                    power = 0.0;
                    break;
                case Family::dipole2:
                    if (sides == Sides::lower_upper) {
                        kernel = [=](double xi) {
                            const Complex b1 = beta(xi, k1), b2 = beta(xi, k2);
                            return b1 * phase(b1, b2) / (b1 + b2);
                        };
                        prefactor = 1.0 / (2.0 * pi);
                    } else {
                        kernel = [=](double xi) {
                            const Complex b1 = beta(xi, k1), b2 = beta(xi, k2);
                            return b2 * phase(b1, b2) / (b1 + b2);
                        };
                        prefactor = -1.0 / (2.0 * pi);
                    }
                    power = 0.0;
                    break;
            }
            break;
        }
    }

    const Parity parity = family == Family::dipole1 ? Parity::odd : Parity::even;
    const auto spec = fold_even_odd(kernel, parity, d, {k1, k2}, DecayClass::exponential(rate, power));
    const Complex integral = integrate_halfline(spec, opts).value;
    return (imaginary_prefactor ? I * prefactor : Complex(prefactor, 0.0)) * integral;
}

}  // namespace

namespace debug {
void set_branch_flip(bool flipped) { g_branch_flip.store(flipped); }
bool branch_flip() { return g_branch_flip.load(); }
}  // namespace debug

Complex beta(double xi, double kappa) {
    const double a = std::abs(xi);
    if (a <= kappa) return {std::sqrt((kappa - a) * (kappa + a)), 0.0};
    const double im = std::sqrt((a - kappa) * (a + kappa));
    return {0.0, g_branch_flip.load(std::memory_order_relaxed) ? -im : im};
}

Complex green_planar_scattered(const Point& x, const Point& xs, const Medium& medium,
                               const QuadOptions& opts) {
    return planar_integral(Family::monopole, x, xs, medium, opts);
}

Complex green_planar_total(const Point& x, const Point& xs, const Medium& medium,
                           const QuadOptions& opts) {
    const Complex gs = green_planar_scattered(x, xs, medium, opts);
    if ((x(1) > 0.0) != (xs(1) > 0.0)) return gs;
    return gs + fundamental_solution(medium.planar_kappa(xs(1)), x, xs);
}

Complex dipole_planar_scattered(const Point& x, const Point& xs, int ell, const Medium& medium,
                                const QuadOptions& opts) {
    if (ell != 1 && ell != 2) throw DomainError("dipole direction must be 1 or 2");
    return planar_integral(ell == 1 ? Family::dipole1 : Family::dipole2, x, xs, medium, opts);
}

Complex dipole_planar_total(const Point& x, const Point& xs, int ell, const Medium& medium,
                            const QuadOptions& opts) {
    const Complex us = dipole_planar_scattered(x, xs, ell, medium, opts);
    if ((x(1) > 0.0) != (xs(1) > 0.0)) return us;
    return us + fundamental_solution_grad(medium.planar_kappa(xs(1)), x, xs, ell);
}

Complex planar_total(const SourceSpec& src, const Point& x, const Medium& medium,
                     const QuadOptions& opts) {
    if (src.kind == SourceKind::monopole) return green_planar_total(x, src.position, medium, opts);
    return dipole_planar_total(x, src.position, src.ell, medium, opts);
}

Complex free_space_field(const SourceSpec& src, const Point& x, double kappa) {
    if (src.kind == SourceKind::monopole) return fundamental_solution(kappa, x, src.position);
    return fundamental_solution_grad(kappa, x, src.position, src.ell);
}

}  // namespace lscat
