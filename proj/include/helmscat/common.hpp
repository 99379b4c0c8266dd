// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace helmscat
{

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid surface description, star-shapedness violation, overlapping or
/// coincident geometry.
class GeometryError : public Error
{
public:
    using Error::Error;
};

/// Singular or unsolvable linear system, resource caps.
class SolverError : public Error
{
public:
    using Error::Error;
};

/// Out-of-range arguments to special functions and fits.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// Strictly positive wavenumber.
class Wavenumber
{
public:
    explicit Wavenumber(double k) : k_(k)
    {
        if (!(k > 0.0) || !std::isfinite(k))
            throw DomainError("wavenumber must be positive and finite, got " + std::to_string(k));
    }
    double value() const { return k_; }
    operator double() const { return k_; }

private:
    double k_;
};

/// Non-fatal diagnostics go through a process-wide sink; the default writes
/// to stderr. Returns the previous sink.
using WarningSink = std::function<void(const std::string &)>;
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string &message);

/// Unit vector from polar/azimuthal angles.
inline Vec3 direction(double theta, double phi)
{
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

/// Polar and azimuthal angle of a (not necessarily normalized) vector, phi in [0, 2pi).
inline std::pair<double, double> angles(const Vec3 &v)
{
    const double r = v.norm();
    const double theta = std::acos(std::clamp(v.z() / r, -1.0, 1.0));
    double phi = std::atan2(v.y(), v.x());
    if (phi < 0.0)
        phi += 2.0 * pi;
    return {theta, phi};
}

} // namespace helmscat
