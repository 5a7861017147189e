#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dwg/operator1d.hpp"
#include "dwg/transverse.hpp"

using namespace dwg;

namespace {
const SectionGeometry kPiSection(kPi);
}

TEST_CASE("undamped operator is real symmetric with Neumann spectrum") {
    Grid1D grid(kPiSection, 1000);
    auto m = assemble(kPiSection, cplx(0.0, 0.0), 1.0, grid);
    for (const auto& v : m.diag) CHECK(v.imag() == 0.0);
    auto ev = full_spectrum(m);
    CHECK(std::abs(ev[0]) < 1e-5);          // lowest ~ 0
    CHECK(ev[1].real() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(ev[2].real() == doctest::Approx(4.0).epsilon(1e-4));
    for (const auto& e : ev) {
        CHECK(e.imag() == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(e.real() > -1e-8);
    }
}

TEST_CASE("interior stencil matches h^2 [-1 2 -1] / spacing^2") {
    Grid1D grid(kPiSection, 200);
    auto m = assemble(kPiSection, cplx(0.5, 0.0), 0.1, grid);
    const double k = 0.1 * 0.1 / (grid.spacing * grid.spacing);
    CHECK(m.diag[57] == cplx(2.0 * k, 0.0));
    CHECK(m.off[57] == cplx(-k, 0.0));
}

TEST_CASE("weyl count grows like ell sqrt(R) / pi in the undamped case") {
    Grid1D grid(kPiSection, 2000);
    auto m = assemble(kPiSection, cplx(0.0, 0.0), 1.0, grid);
    auto ev = full_spectrum(m);
    for (double R : {100.0, 400.0, 900.0}) {
        int count = 0;
        for (const auto& e : ev)
            if (e.real() <= R) ++count;
        const double predicted = std::sqrt(R) + 1;  // lattice n = 0..sqrt(R)
        CHECK(std::abs(count - predicted) <= 2);
    }
}

TEST_CASE("damped spectrum is dissipative and matches the secular roots") {
    Grid1D grid(kPiSection, 500);
    auto m = assemble(kPiSection, cplx(1.0, 0.0), 1.0, grid);
    auto ev = full_spectrum(m);
    for (const auto& e : ev) {
        CHECK(e.imag() <= 1e-8);
        CHECK(e.real() >= -1e-8);
    }
    auto lam0 = solve_root(kPiSection, 0, cplx(1.0, 0.0)).lambda;
    CHECK(std::abs(ev[0] - lam0) / std::max(1.0, std::abs(lam0)) < 1e-3);
}

TEST_CASE("eigenvalue error converges at second order") {
    const cplx target = solve_root(kPiSection, 1, cplx(1.0, 0.0)).lambda;
    double errs[3];
    int idx = 0;
    for (int n : {500, 1000, 2000}) {
        Grid1D grid(kPiSection, n);
        auto m = assemble(kPiSection, cplx(1.0, 0.0), 1.0, grid);
        errs[idx++] = std::abs(eigenvalue_near(m, target) - target);
    }
    const double order1 = std::log2(errs[0] / errs[1]);
    const double order2 = std::log2(errs[1] / errs[2]);
    CHECK(order1 > 1.8);
    CHECK(order2 > 1.8);
}

TEST_CASE("tridiagonal LU solves against dense backslash") {
    Grid1D grid(kPiSection, 64);
    auto m = assemble(kPiSection, cplx(0.7, 0.2), 0.3, grid);
    const cplx zeta(0.9, 0.05);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    Eigen::VectorXcd b(m.dim);
    for (int i = 0; i < m.dim; ++i) b(i) = cplx(g(rng), g(rng));
    Eigen::MatrixXcd a = m.dense();
    for (int i = 0; i < m.dim; ++i) a(i, i) -= zeta;
    Eigen::VectorXcd x_ref = a.partialPivLu().solve(b);
    std::vector<cplx> x(b.data(), b.data() + m.dim);
    TriLU lu(m, zeta);
    REQUIRE(!lu.singular());
    lu.solve(x.data());
    for (int i = 0; i < m.dim; ++i) CHECK(std::abs(x[i] - x_ref(i)) < 1e-10);
}

TEST_CASE("resolvent norm reduces to distance for the self-adjoint case") {
    Grid1D grid(kPiSection, 300);
    auto m = assemble(kPiSection, cplx(0.0, 0.0), 1.0, grid);
    const double v = resolvent_norm(m, cplx(0.5, 0.0));
    CHECK(v == doctest::Approx(2.0).epsilon(1e-3));
    // hitting an eigenvalue produces the sentinel
    auto ev = full_spectrum(m);
    CHECK(std::isinf(resolvent_norm(m, ev[1])));
}

TEST_CASE("iterative sigma_min path agrees with dense SVD") {
    Grid1D grid(kPiSection, 150);
    auto m = assemble(kPiSection, cplx(1.0, 0.1), 0.1, grid);
    for (cplx zeta : {cplx(1.0, 0.0), cplx(0.8, 0.02), cplx(1.2, -0.01)}) {
        const double dense = resolvent_norm(m, zeta, /*svd_dim_limit=*/4096);
        const double iter = resolvent_norm(m, zeta, /*svd_dim_limit=*/0);
        CHECK(iter == doctest::Approx(dense).epsilon(1e-6));
    }
}

TEST_CASE("degenerate window reduces the scan to one resolvent call") {
    Grid1D grid(kPiSection, 200);
    GapScanConfig cfg;
    cfg.h_list = {0.1};
    cfg.gamma = 1e-12;
    cfg.points = 2;  // collapses to (essentially) a single point
    std::vector<GapScanSample> samples;
    auto rows = spectral_gap_scan(kPiSection, cfg, grid, &samples);
    REQUIRE(rows.size() == 1);
    auto m = assemble(kPiSection, cplx(1.0, 0.1), 0.1, grid);
    const double direct = 0.1 * resolvent_norm(m, cplx(1.0, 0.1));
    CHECK(rows[0].sup_h_norm == doctest::Approx(direct).epsilon(1e-4));
}

TEST_CASE("gap scan trend is bounded and parallel matches serial") {
    Grid1D grid(kPiSection, 200);
    GapScanConfig cfg;
    cfg.h_list = {0.2, 0.1};
    cfg.points = 5;
    auto rows = spectral_gap_scan(kPiSection, cfg, grid);
    auto rows_serial = spectral_gap_scan_serial(kPiSection, cfg, grid);
    REQUIRE(rows.size() == rows_serial.size());
    double lo = 1e300, hi = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(!rows[i].sentinel);
        CHECK(rows[i].sup_h_norm == doctest::Approx(rows_serial[i].sup_h_norm).epsilon(1e-9));
        lo = std::min(lo, rows[i].sup_h_norm);
        hi = std::max(hi, rows[i].sup_h_norm);
    }
    CHECK(hi <= 3.0 * lo);
}

TEST_CASE("real window at real zeta stays finite for damped alpha") {
    Grid1D grid(kPiSection, 200);
    for (double ar : {0.8, 1.0, 1.2}) {
        auto m = assemble(kPiSection, cplx(ar, 0.0), 0.1, grid);
        CHECK(std::isfinite(resolvent_norm(m, cplx(1.0, 0.0))));
    }
}
