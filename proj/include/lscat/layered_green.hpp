#ifndef LSCAT_LAYERED_GREEN_HPP
#define LSCAT_LAYERED_GREEN_HPP

#include "lscat/quad.hpp"
#include "lscat/types.hpp"

namespace lscat {

/// Minimum distance of an evaluation point from the planar line x2 = 0.
inline constexpr double interface_clearance = 1e-6;

enum class SourceKind { monopole, dipole };

/// Point source Phi(., xs) or its derivative d/dx_ell Phi(., xs).
struct SourceSpec {
    SourceKind kind = SourceKind::monopole;
    Point position = Point::Zero();
    int ell = 0;

    static SourceSpec monopole(const Point& p) { return {SourceKind::monopole, p, 0}; }
    static SourceSpec dipole(const Point& p, int ell) { return {SourceKind::dipole, p, ell}; }
};

/// Vertical wavenumber: sqrt(kappa^2 - xi^2) if |xi| < kappa, i sqrt(xi^2 - kappa^2) otherwise.
Complex beta(double xi, double kappa);

namespace debug {
/// Negative control for the verification suite: flips the evanescent branch of beta.
void set_branch_flip(bool flipped);
bool branch_flip();
}  // namespace debug

/// Scattered (same side) or transmitted (opposite sides) part of the planar
/// two-layer Green's function. Coincident points are allowed: the scattered part
/// is smooth there. Throws GeometryError if either point is within
/// interface_clearance of x2 = 0.
Complex green_planar_scattered(const Point& x, const Point& xs, const Medium& medium,
                               const QuadOptions& opts = {});

/// G(x, xs; Gamma0) = G^s + Phi_kappa(xs side) on the same side, G^s otherwise.
Complex green_planar_total(const Point& x, const Point& xs, const Medium& medium,
                           const QuadOptions& opts = {});

/// Planar response U^s to the dipole source d/dx_ell Phi(., xs).
Complex dipole_planar_scattered(const Point& x, const Point& xs, int ell, const Medium& medium,
                                const QuadOptions& opts = {});

Complex dipole_planar_total(const Point& x, const Point& xs, int ell, const Medium& medium,
                            const QuadOptions& opts = {});

/// Planar total field of either source kind.
Complex planar_total(const SourceSpec& src, const Point& x, const Medium& medium,
                     const QuadOptions& opts = {});

/// Free-space field of a source at wavenumber kappa.
Complex free_space_field(const SourceSpec& src, const Point& x, double kappa);

}  // namespace lscat

#endif  // LSCAT_LAYERED_GREEN_HPP
