#include "lscat/specfun.hpp"

#include <cmath>

namespace lscat {

namespace {

BesselValues ascending_series(double x) {
    const double q = 0.25 * x * x;
    const double half = 0.5 * x;
    const double log_half = std::log(half);

    // term_k = (-q)^k / (k!)^2 and term1_k = (-q)^k / (k! (k+1)!)
    double term0 = 1.0, term1 = 1.0;
    double j0 = 0.0, s1 = 0.0;
    double y0_sum = 0.0, y1_sum = 0.0;
    double harmonic = 0.0;  // H_k
    for (int k = 0; k < 200; ++k) {
        if (k > 0) {
            term0 *= -q / (double(k) * double(k));
            term1 *= -q / (double(k) * double(k + 1));
            harmonic += 1.0 / k;
        }
        j0 += term0;
        s1 += term1;
        y0_sum -= harmonic * term0;
        // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
        y1_sum += (-2.0 * euler_gamma + 2.0 * harmonic + 1.0 / (k + 1)) * term1;
        if (k > half && std::abs(term0) < 1e-18 && std::abs(term1) < 1e-18) break;
    }
    BesselValues v{};
    v.j0 = j0;
    v.j1 = half * s1;
    v.y0 = (2.0 / pi) * ((log_half + euler_gamma) * v.j0 + y0_sum);
    v.y1 = (2.0 / pi) * v.j1 * log_half - 2.0 / (pi * x) - (1.0 / pi) * half * y1_sum;
    return v;
}

// Hankel's asymptotic expansion: returns {J_nu, Y_nu} for nu in {0, 1}.
std::pair<double, double> asymptotic(double x, int nu) {
    const double mu = 4.0 * nu * nu;
    double p = 0.0, q = 0.0;
    double term = 1.0;
    double last = std::abs(term);
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            const double odd = 2.0 * k - 1.0;
            const double next = term * (mu - odd * odd) / (k * 8.0 * x);
            if (std::abs(next) > last) break;  // expansion started to diverge
            term = next;
            last = std::abs(term);
        }
        switch (k % 4) {
            case 0: p += term; break;
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
        }
        if (last < 1e-17) break;
    }
    const double chi = x - (0.5 * nu + 0.25) * pi;
    const double amp = std::sqrt(2.0 / (pi * x));
    const double c = std::cos(chi), s = std::sin(chi);
    return {amp * (p * c - q * s), amp * (p * s + q * c)};
}

}  // namespace

BesselValues bessel_j0j1_y0y1(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_j0j1_y0y1: argument must be positive");
    if (x <= bessel_switch_point) return ascending_series(x);
    auto [j0, y0] = asymptotic(x, 0);
    auto [j1, y1] = asymptotic(x, 1);
    return {j0, j1, y0, y1};
}

Complex hankel1_0(double x) {
    const auto b = bessel_j0j1_y0y1(x);
    return {b.j0, b.y0};
}

Complex hankel1_1(double x) {
    const auto b = bessel_j0j1_y0y1(x);
    return {b.j1, b.y1};
}

Complex fundamental_solution(double kappa, const Point& x, const Point& y) {
    const double r = (x - y).norm();
    if (r == 0.0) throw SingularityError("fundamental_solution: coincident points");
    return 0.25 * I * hankel1_0(kappa * r);
}

Complex fundamental_solution_grad(double kappa, const Point& x, const Point& y, int ell) {
    const Point d = x - y;
    const double r = d.norm();
    if (r == 0.0) throw SingularityError("fundamental_solution_grad: coincident points");
    const double comp = d(ell - 1);
    if (comp == 0.0) return {0.0, 0.0};
    return -0.25 * I * kappa * hankel1_1(kappa * r) * (comp / r);
}

Complex fundamental_solution_hessian(double kappa, const Point& x, const Point& y, int j, int ell) {
    const Point d = x - y;
    const double r = d.norm();
    if (r == 0.0) throw SingularityError("fundamental_solution_hessian: coincident points");
    const double z = kappa * r;
    const Complex h0 = hankel1_0(z), h1 = hankel1_1(z);
    const Complex dh1 = h0 - h1 / z;
    const double dj = d(j - 1), dl = d(ell - 1);
    const double delta = j == ell ? 1.0 : 0.0;
    return -0.25 * I * kappa *
           (kappa * dh1 * dj * dl / (r * r) + h1 * (delta / r - dl * dj / (r * r * r)));
}

Complex fundamental_solution_regular_part(double kappa) {
    return Complex(-(std::log(0.5 * kappa) + euler_gamma) / (2.0 * pi), 0.25);
}

Complex fundamental_solution_cell_average(double kappa, double h) {
    // int_{[-a,a]^2} log|y| dy = 2 a^2 (log(2 a^2) - 3 + pi/2), a = h/2
    const double a = 0.5 * h;
    const double mean_log = 0.5 * (std::log(2.0 * a * a) - 3.0 + 0.5 * pi);
    return -mean_log / (2.0 * pi) + fundamental_solution_regular_part(kappa);
}

}  // namespace lscat
