#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace dwg {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Straight guide R x (0, ell). nu is the spacing of the undamped transverse
// wavenumbers, upsilon the boundary-to-interior measure ratio of the section.
struct SectionGeometry {
    double ell;
    double nu;
    double upsilon;

    explicit SectionGeometry(double length)
        : ell(length), nu(kPi / length), upsilon(2.0 / length) {
        if (!(length > 0.0)) throw std::invalid_argument("section length must be positive");
    }
};

}  // namespace dwg
