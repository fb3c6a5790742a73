#ifndef LSCAT_QUAD_HPP
#define LSCAT_QUAD_HPP

#include <functional>
#include <vector>

#include "lscat/types.hpp"

namespace lscat {

/// Tail envelope of an integrand: |f(xi)| <~ C xi^-power exp(-rate xi).
/// At least one of rate > 0 or power > 1 is required for a finite tail.
struct DecayClass {
    double rate = 0.0;
    double power = 0.0;

    static DecayClass exponential(double rate, double power = 0.0) { return {rate, power}; }
    static DecayClass algebraic(double power) { return {0.0, power}; }
};

struct IntegrandSpec {
    std::function<Complex(double)> evaluator;
    /// Non-oscillatory magnitude bound used for tail truncation; defaults to |evaluator|.
    std::function<double(double)> envelope;
    /// Positive branch points with 1/sqrt-type endpoint behaviour.
    std::vector<double> breakpoints;
    DecayClass decay;
};

struct QuadOptions {
    double tol = 1e-8;
    int max_panels = 40000;
};

struct QuadResult {
    Complex value;
    double error = 0.0;
    int panels = 0;
};

/// \int_0^\infty evaluator(xi) d xi by adaptive 15-point Gauss-Legendre panels.
/// Panels adjacent to a branch point kappa use xi = kappa sin t (below) or
/// xi = kappa cosh t (above). Throws AccuracyError when the panel budget runs out.
QuadResult integrate_halfline(const IntegrandSpec& spec, const QuadOptions& opts = {});

/// Same machinery on a finite interval without substitutions.
QuadResult integrate_interval(const std::function<Complex(double)>& f, double a, double b,
                              const QuadOptions& opts = {});

/// Parity of a two-sided kernel k(xi) multiplying exp(i xi d).
enum class Parity { even, odd };

/// Folds \int_{-inf}^{inf} k(xi) exp(i xi d) d xi onto the half line:
/// even k -> 2 \int_0^inf k cos(xi d), odd k -> 2i \int_0^inf k sin(xi d).
/// `kernel_envelope` bounds |k| and is reused as the tail envelope.
IntegrandSpec fold_even_odd(std::function<Complex(double)> kernel, Parity parity, double d,
                            std::vector<double> breakpoints, DecayClass decay,
                            std::function<double(double)> kernel_envelope = {});

}  // namespace lscat

#endif  // LSCAT_QUAD_HPP
