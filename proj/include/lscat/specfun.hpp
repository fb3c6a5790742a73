#ifndef LSCAT_SPECFUN_HPP
#define LSCAT_SPECFUN_HPP

#include "lscat/types.hpp"

namespace lscat {

struct BesselValues {
    double j0;
    double j1;
    double y0;
    double y1;
};

/// J0, J1, Y0, Y1 at x > 0. Ascending series up to x = 12, Hankel asymptotic
/// expansion beyond. Throws DomainError for x <= 0.
BesselValues bessel_j0j1_y0y1(double x);

/// H0^(1)(x) and H1^(1)(x) for x > 0.
Complex hankel1_0(double x);
Complex hankel1_1(double x);

/// Switch point between the ascending series and the asymptotic expansion.
inline constexpr double bessel_switch_point = 12.0;

/// Phi_kappa(x, y) = (i/4) H0^(1)(kappa |x - y|).
Complex fundamental_solution(double kappa, const Point& x, const Point& y);

/// d/dx_ell Phi_kappa(x, y), ell in {1, 2}.
Complex fundamental_solution_grad(double kappa, const Point& x, const Point& y, int ell);

/// d^2/(dx_j dx_ell) Phi_kappa(x, y), j, ell in {1, 2}.
Complex fundamental_solution_hessian(double kappa, const Point& x, const Point& y, int j, int ell);

/// Limit of Phi_kappa(r) + log(r) / (2 pi) as r -> 0.
Complex fundamental_solution_regular_part(double kappa);

/// Mean of Phi_kappa(c, .) over the axis-aligned square of side h centred at c:
/// closed-form integral of the log term plus the regular part at the centre.
Complex fundamental_solution_cell_average(double kappa, double h);

}  // namespace lscat

#endif  // LSCAT_SPECFUN_HPP
