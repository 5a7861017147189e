#include "dwg/operator1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dwg {

OperatorMatrix assemble(const SectionGeometry& geom, cplx alpha, double h,
                        const Grid1D& grid) {
    if (!(h > 0.0)) throw std::invalid_argument("semiclassical parameter must be positive");
    OperatorMatrix m;
    m.dim = grid.nodes();
    m.h = h;
    m.alpha = alpha;
    m.spacing = grid.spacing;
    const double dy = grid.spacing;
    const double k = h * h / (dy * dy);
    m.diag.assign(m.dim, cplx(2.0 * k, 0.0));
    m.off.assign(m.dim - 1, cplx(-k, 0.0));
    // Ghost elimination at the impedance rows, then the half-cell similarity
    // transform that restores symmetry: boundary diagonal keeps the collocation
    // value scaled by the half weight, couplings pick up sqrt(2).
    const cplx bdiag = 2.0 * k - 2.0 * cplx(0.0, 1.0) * alpha * h / dy;
    m.diag.front() = bdiag;
    m.diag.back() = bdiag;
    m.off.front() = -std::sqrt(2.0) * k;
    m.off.back() = -std::sqrt(2.0) * k;
    return m;
}

Eigen::MatrixXcd OperatorMatrix::dense() const {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) a(i, i) = diag[i];
    for (int i = 0; i + 1 < dim; ++i) {
        a(i, i + 1) = off[i];
        a(i + 1, i) = off[i];
    }
    return a;
}

TriLU::TriLU(const OperatorMatrix& m, cplx zeta, cplx xi2) {
    std::vector<cplx> d(m.diag.begin(), m.diag.end());
    for (auto& v : d) v += xi2 - zeta;
    std::vector<cplx> du(m.off.begin(), m.off.end());
    std::vector<cplx> dl(m.off.begin(), m.off.end());
    n_ = m.dim;
    factor(std::move(dl), std::move(d), std::move(du));
}

TriLU::TriLU(const std::vector<cplx>& diag, const std::vector<cplx>& off, cplx shift) {
    std::vector<cplx> d(diag.begin(), diag.end());
    for (auto& v : d) v -= shift;
    n_ = int(diag.size());
    factor(std::vector<cplx>(off), std::move(d), std::vector<cplx>(off));
}

// gttrf-style elimination with partial pivoting (second superdiagonal filled in).
void TriLU::factor(std::vector<cplx> dl, std::vector<cplx> d, std::vector<cplx> du) {
    d_ = std::move(d);
    c_ = std::move(dl);  // will hold the multipliers
    e_ = std::move(du);  // first superdiagonal of U
    f_.assign(n_ > 2 ? n_ - 2 : 0, cplx(0.0, 0.0));
    pivot_.assign(std::max(n_ - 1, 0), 0);
    for (int i = 0; i + 1 < n_; ++i) {
        if (std::abs(d_[i]) >= std::abs(c_[i])) {
            if (d_[i] == cplx(0.0, 0.0)) {
                singular_ = true;
                d_[i] = cplx(1e-300, 0.0);
            }
            const cplx fact = c_[i] / d_[i];
            c_[i] = fact;
            d_[i + 1] -= fact * e_[i];
        } else {
            pivot_[i] = 1;
            const cplx fact = d_[i] / c_[i];
            d_[i] = c_[i];
            c_[i] = fact;
            const cplx temp = e_[i];
            e_[i] = d_[i + 1];
            d_[i + 1] = temp - fact * d_[i + 1];
            if (i + 2 < n_) {
                f_[i] = e_[i + 1];
                e_[i + 1] = -fact * e_[i + 1];
            }
        }
    }
    if (n_ > 0 && d_[n_ - 1] == cplx(0.0, 0.0)) {
        singular_ = true;
        d_[n_ - 1] = cplx(1e-300, 0.0);
    }
}

void TriLU::solve(cplx* x) const {
    for (int i = 0; i + 1 < n_; ++i) {
        if (pivot_[i]) std::swap(x[i], x[i + 1]);
        x[i + 1] -= c_[i] * x[i];
    }
    for (int i = n_ - 1; i >= 0; --i) {
        cplx r = x[i];
        if (i + 1 < n_) r -= e_[i] * x[i + 1];
        if (i + 2 < n_) r -= f_[i] * x[i + 2];
        x[i] = r / d_[i];
    }
}

std::vector<cplx> full_spectrum(const OperatorMatrix& m) {
    if (m.dim > 6000) throw std::invalid_argument("dense spectrum limited to dim <= 6000");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.dense(), false);
    if (es.info() != Eigen::Success) throw EigSolverFailure("dense eigensolver failed");
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.dim);
    std::sort(ev.begin(), ev.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });
    return ev;
}

cplx eigenvalue_near(const OperatorMatrix& m, cplx shift) {
    const int n = m.dim;
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss;
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(gauss(rng), gauss(rng));

    auto normalize = [&](std::vector<cplx>& w) {
        double s = 0.0;
        for (const auto& x : w) s += std::norm(x);
        s = std::sqrt(s);
        for (auto& x : w) x /= s;
        return s;
    };
    auto rayleigh = [&](const std::vector<cplx>& w) {
        // w^H M w for the tridiagonal matrix
        cplx num(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            cplx mv = m.diag[i] * w[i];
            if (i > 0) mv += m.off[i - 1] * w[i - 1];
            if (i + 1 < n) mv += m.off[i] * w[i + 1];
            num += std::conj(w[i]) * mv;
        }
        return num;
    };

    normalize(v);
    cplx mu = shift;
    cplx prev = mu;
    for (int it = 0; it < 60; ++it) {
        TriLU lu(m, mu);
        if (lu.singular()) return mu;
        lu.solve(v.data());
        normalize(v);
        const cplx lam = rayleigh(v);
        if (std::abs(lam - prev) < 1e-13 * std::max(1.0, std::abs(lam))) return lam;
        prev = lam;
        if (it >= 2) mu = lam;  // switch to Rayleigh shifts once roughly locked
    }
    return prev;
}

double resolvent_norm(const OperatorMatrix& m, cplx zeta, int svd_dim_limit) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    if (m.dim <= svd_dim_limit) {
        Eigen::MatrixXcd a = m.dense();
        for (int i = 0; i < m.dim; ++i) a(i, i) -= zeta;
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
        const double smin = svd.singularValues()(m.dim - 1);
        if (!(smin > 1e-290)) return kInf;
        return 1.0 / smin;
    }
    TriLU lu(m, zeta);
    if (lu.singular()) return kInf;
    // Conjugate system: (M - zeta)^H x = conj((conj(M) - conj(zeta)) conj(x)).
    OperatorMatrix mc = m;
    for (auto& v : mc.diag) v = std::conj(v);
    for (auto& v : mc.off) v = std::conj(v);
    TriLU luh(mc, std::conj(zeta));
    if (luh.singular()) return kInf;

    std::mt19937_64 rng(777);
    std::normal_distribution<double> gauss;
    const int n = m.dim;
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(gauss(rng), gauss(rng));
    double norm = 0.0;
    auto nrm = [&](const std::vector<cplx>& w) {
        double s = 0.0;
        for (const auto& x : w) s += std::norm(x);
        return std::sqrt(s);
    };
    const double n0 = nrm(v);
    for (auto& x : v) x /= n0;
    double prev = 0.0;
    for (int it = 0; it < 400; ++it) {
        // v <- (M-z)^{-H} (M-z)^{-1} v, power iteration for 1/sigma_min^2
        lu.solve(v.data());
        for (auto& x : v) x = std::conj(x);
        luh.solve(v.data());
        for (auto& x : v) x = std::conj(x);
        const double s = nrm(v);
        if (!(s < 1e290)) return kInf;
        for (auto& x : v) x /= s;
        norm = std::sqrt(s);
        if (it > 3 && std::abs(norm - prev) <= 1e-10 * norm) break;
        prev = norm;
    }
    return norm;
}

namespace {

std::vector<GapScanRow> scan_impl(const SectionGeometry& geom, const GapScanConfig& cfg,
                                  const Grid1D& grid, std::vector<GapScanSample>* samples,
                                  bool parallel) {
    std::vector<GapScanRow> rows;
    for (const double h : cfg.h_list) {
        const int p = cfg.points;
        std::vector<double> ticks(p);
        for (int i = 0; i < p; ++i)
            ticks[i] = 1.0 - cfg.gamma + 2.0 * cfg.gamma * i / (p - 1);

        double sup = 0.0;
        bool sentinel = false;
        std::vector<GapScanSample> local(size_t(p) * p * p * p);

        const long total = long(p) * p;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
        for (long ia = 0; ia < total; ++ia) {
            const int iar = int(ia / p);
            const int iai = int(ia % p);
            const cplx alpha(ticks[iar], h * ticks[iai]);
            const OperatorMatrix m = assemble(geom, alpha, h, grid);
            for (int izr = 0; izr < p; ++izr) {
                for (int izi = 0; izi < p; ++izi) {
                    const cplx zeta(ticks[izr], h * ticks[izi]);
                    const double nrm = resolvent_norm(m, zeta);
                    local[((size_t(iar) * p + iai) * p + izr) * p + izi] =
                        GapScanSample{h, alpha, zeta, nrm};
                }
            }
        }
        for (const auto& s : local) {
            if (std::isinf(s.norm)) sentinel = true;
            else sup = std::max(sup, h * s.norm);
        }
        if (samples) samples->insert(samples->end(), local.begin(), local.end());
        rows.push_back(GapScanRow{h, sup, sentinel});
    }
    return rows;
}

}  // namespace

std::vector<GapScanRow> spectral_gap_scan(const SectionGeometry& geom,
                                          const GapScanConfig& cfg, const Grid1D& grid,
                                          std::vector<GapScanSample>* samples) {
    return scan_impl(geom, cfg, grid, samples, true);
}

std::vector<GapScanRow> spectral_gap_scan_serial(const SectionGeometry& geom,
                                                 const GapScanConfig& cfg,
                                                 const Grid1D& grid,
                                                 std::vector<GapScanSample>* samples) {
    return scan_impl(geom, cfg, grid, samples, false);
}

void write_gap_csv(std::ostream& os, const std::vector<GapScanSample>& samples) {
    os << "h,alpha_re,alpha_im,zeta_re,zeta_im,resolvent_norm,h_times_norm\n";
    char line[320];
    for (const auto& s : samples) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      s.h, s.alpha.real(), s.alpha.imag(), s.zeta.real(), s.zeta.imag(),
                      s.norm, s.h * s.norm);
        os << line;
    }
}

}  // namespace dwg
