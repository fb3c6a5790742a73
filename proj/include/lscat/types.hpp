#ifndef LSCAT_TYPES_HPP
#define LSCAT_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lscat {

using Complex = std::complex<double>;
using Point = Eigen::Vector2d;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;
inline constexpr Complex I{0.0, 1.0};

/// Wavenumbers of the upper (kappa1) and lower (kappa2) media.
struct Medium {
    double kappa1 = 1.0;
    double kappa2 = 1.0;

    /// eta = kappa2^2 - kappa1^2
    double contrast() const { return kappa2 * kappa2 - kappa1 * kappa1; }
    /// Wavenumber of the planar two-layer background at height x2.
    double planar_kappa(double x2) const { return x2 > 0.0 ? kappa1 : kappa2; }
};

// Error hierarchy. The CLI maps ConfigError/GeometryError to exit code 2 and
// the numerical ones to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved)
        : Error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

}  // namespace lscat

#endif  // LSCAT_TYPES_HPP
