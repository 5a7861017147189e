#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "dwg/geometry.hpp"

namespace dwg {

// Roots theta_n(alpha) of (alpha - theta)^2 e^{2 i ell theta} = (alpha + theta)^2,
// the transverse eigenvalue branches of -d^2/dy^2 on (0, ell) with
// u'(0) = -i alpha u(0), u'(ell) = i alpha u(ell). lambda = theta^2.

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Root left the strip (n nu, (n+1) nu) expected for real alpha > 0.
struct BranchJump : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TransverseRoot {
    int n = 0;
    cplx alpha;
    cplx theta;
    cplx lambda;
    double residual = 0.0;  // |G(theta)|
};

// Eigenfunction phi(y) = cos(theta y) + coeff_b sin(theta y); constant 1 for the
// undamped ground branch. pairing = int_0^ell phi(y)^2 dy (bilinear, no conjugation):
// the adjoint eigenfunctions for real alpha are the unconjugated phi.
struct TransverseMode {
    TransverseRoot root;
    cplx coeff_b;
    cplx pairing;

    cplx eval(double y) const;
    cplx eval_deriv(double y) const;
};

TransverseRoot solve_root(const SectionGeometry& geom, int n, cplx alpha,
                          std::optional<cplx> guess = std::nullopt);

TransverseMode make_mode(const SectionGeometry& geom, const TransverseRoot& root);

// One root per grid value, each seeded by the previous; grid must start at 0 and
// increase. Steps that jump the strip are bisected (depth-limited).
std::vector<TransverseRoot> continuation_sweep(const SectionGeometry& geom, int n,
                                               const std::vector<double>& alpha_grid);

// lambda_0(alpha)/alpha for small alpha; tends to -i upsilon.
cplx lambda0_slope(const SectionGeometry& geom, double alpha_small);

enum class Regime { LogWindow, Proportional, Power };

struct ProbeSpec {
    Regime regime = Regime::Proportional;
    double beta = 0.0;   // log window: alpha = n nu + beta ln n
    double gamma = 0.5;  // proportional: alpha = gamma n nu
    double rho = 0.5;    // power: alpha = n nu + s n^rho
    double s = 2.0;
};

struct ProbeResult {
    int n = 0;
    double alpha = 0.0;
    cplx theta;
    // Primary regime functional (see regime_quantity below) and its limit.
    double computed = 0.0;
    double predicted = 0.0;
    double rel_error = 0.0;
    // Secondary part recorded alongside (imaginary part for the log window,
    // real offset for the others).
    double secondary_computed = 0.0;
    double secondary_predicted = 0.0;
};

// Regime functionals:
//   LogWindow:    Re theta      -> n nu + nu (1 - arg(beta + i/ell)/pi)
//   Proportional: |Im theta|    -> (1/ell) ln|(1+gamma)/(1-gamma)|
//   Power:        -Im theta     -> ((1-rho)/ell) ln n
ProbeResult asymptotic_probe(const SectionGeometry& geom, const ProbeSpec& spec, int n);

double probe_alpha(const SectionGeometry& geom, const ProbeSpec& spec, int n);

// CSV columns: n, alpha, re_theta, im_theta, residual.
void write_sweep_csv(std::ostream& os, const std::vector<TransverseRoot>& roots,
                     bool header = true);

}  // namespace dwg
