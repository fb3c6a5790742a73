#ifndef LSCAT_VERIFY_HPP
#define LSCAT_VERIFY_HPP

#include <functional>
#include <string>
#include <vector>

#include "lscat/types.hpp"

namespace lscat {

using Field = std::function<Complex(const Point&)>;

/// Five-point Laplacian of `u` at `center` with spacing h, plus kappa^2 u.
Complex helmholtz_residual(const Field& u, const Point& center, double h, double kappa);

/// Five-point stencil site; the probe should stay 10 h away from sources and interfaces.
struct StencilProbe {
    Point center = Point::Zero();
    double h = 1e-2;
    double kappa = 1.0;
};
Complex helmholtz_residual(const Field& u, const StencilProbe& probe);

/// |residual(h)| / |residual(h / 2)|; about 4 for a smooth solution.
double stencil_ratio(const Field& u, const Point& center, double h, double kappa);

/// sqrt(r) |d_r u - i kappa u| at origin + r dir, with a central difference in r.
double radiation_defect(const Field& u, const Point& origin, const Point& dir, double r,
                        double kappa, double dr = 1e-4);

/// radiation_defect at each radius.
std::vector<double> radiation_probe(const Field& u, const Point& origin, const Point& dir,
                                    const std::vector<double>& radii, double kappa);

enum class MieKind { sound_soft, neumann, penetrable };

/// Point source Phi_kappa(., source) scattered by a circle in free space.
struct MieProblem {
    MieKind kind = MieKind::sound_soft;
    Point center = Point::Zero();
    double radius = 0.5;
    double kappa = 1.0;
    /// refractive index inside (penetrable)
    Complex index{1.0, 0.0};
    Point source = Point(2.0, 0.0);
    int max_order = 60;
};

/// Scattered field at |x - center| >= radius by separation of variables. Throws
/// AccuracyError unless the last retained mode is below 1e-12 within max_order.
Complex mie_scattered(const MieProblem& problem, const Point& x);

/// J_m(z) for complex z by the ascending series.
Complex bessel_j_complex(int m, Complex z);

struct CheckResult {
    std::string check;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyOptions {
    /// kappa1 != kappa2 exercises every branch of the planar kernel
    Medium medium{1.0, 2.0};
    unsigned seed = 12345;
    int beta_samples = 1000;
};

/// Fast self-consistency checks of the planar layer and the special functions.
/// A check that throws is reported with value NaN and pass = false.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

}  // namespace lscat

#endif  // LSCAT_VERIFY_HPP
