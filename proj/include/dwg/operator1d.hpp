#pragma once

#include <limits>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "dwg/geometry.hpp"

namespace dwg {

struct EigSolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Nodes j * spacing, j = 0..interior+1; both boundary nodes are unknowns.
struct Grid1D {
    int interior;
    double spacing;

    Grid1D(const SectionGeometry& geom, int interior_nodes)
        : interior(interior_nodes), spacing(geom.ell / (interior_nodes + 1)) {
        if (interior_nodes < 16) throw std::invalid_argument("grid wants >= 16 interior nodes");
    }
    int nodes() const { return interior + 2; }
};

// Finite-difference T_{alpha,h} = -h^2 d^2/dy^2 with h u'(0) = -i alpha u(0),
// h u'(ell) = i alpha u(ell), ghost-eliminated at second order. Stored in the
// half-cell-symmetrized form (similar to the collocation matrix, real symmetric
// at alpha = 0): tridiagonal, boundary rows carry the impedance terms.
struct OperatorMatrix {
    int dim = 0;
    double h = 1.0;
    cplx alpha;
    double spacing = 0.0;
    std::vector<cplx> diag;  // dim entries
    std::vector<cplx> off;   // dim-1 entries, symmetric couplings

    Eigen::MatrixXcd dense() const;
};

OperatorMatrix assemble(const SectionGeometry& geom, cplx alpha, double h,
                        const Grid1D& grid);

// Pivoted LU of (M - zeta I) for a tridiagonal M; O(dim) factor and solves.
class TriLU {
  public:
    TriLU(const OperatorMatrix& m, cplx zeta, cplx xi2 = cplx(0.0, 0.0));
    TriLU(const std::vector<cplx>& diag, const std::vector<cplx>& off, cplx shift);
    bool singular() const { return singular_; }
    void solve(cplx* x) const;  // in place, length dim

  private:
    void factor(std::vector<cplx> dl, std::vector<cplx> d, std::vector<cplx> du);
    int n_ = 0;
    bool singular_ = false;
    std::vector<cplx> c_, d_, e_, f_;  // multipliers, diagonal, two superdiagonals
    std::vector<int> pivot_;
};

// All eigenvalues, dense solve; sorted by real part. dim <= 6000.
std::vector<cplx> full_spectrum(const OperatorMatrix& m);

// Single eigenvalue by shifted inverse iteration with Rayleigh refinement;
// the path by which the matrix serves as an oracle for the transcendental roots.
cplx eigenvalue_near(const OperatorMatrix& m, cplx shift);

// 1 / sigma_min(M - zeta I); +infinity sentinel when singular to working precision.
// Dense SVD for small dims, inverse power iteration on (M-zeta)^H (M-zeta) above.
double resolvent_norm(const OperatorMatrix& m, cplx zeta, int svd_dim_limit = 512);

struct GapScanRow {
    double h = 0.0;
    double sup_h_norm = 0.0;  // sup over the window of h * ||(T - zeta)^{-1}||
    bool sentinel = false;    // a singular point inside the window
};

struct GapScanConfig {
    std::vector<double> h_list{0.2, 0.1, 0.05};
    double gamma = 0.25;
    int points = 17;  // lattice points per real/imaginary direction, per parameter
};

struct GapScanSample {
    double h;
    cplx alpha, zeta;
    double norm;
};

// Window of Theorem-style semiclassical boxes: alpha, zeta in
// (1-gamma, 1+gamma) + i h (1-gamma, 1+gamma), sampled points x points each.
std::vector<GapScanRow> spectral_gap_scan(const SectionGeometry& geom,
                                          const GapScanConfig& cfg, const Grid1D& grid,
                                          std::vector<GapScanSample>* samples = nullptr);

// Serial reference for the scan kernel, kept for testing the parallel path.
std::vector<GapScanRow> spectral_gap_scan_serial(const SectionGeometry& geom,
                                                 const GapScanConfig& cfg,
                                                 const Grid1D& grid,
                                                 std::vector<GapScanSample>* samples = nullptr);

// CSV columns: h, alpha_re, alpha_im, zeta_re, zeta_im, resolvent_norm, h_times_norm.
void write_gap_csv(std::ostream& os, const std::vector<GapScanSample>& samples);

}  // namespace dwg
