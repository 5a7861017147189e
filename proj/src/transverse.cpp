#include "dwg/transverse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dwg {

namespace {

// G factors as A * B with A = (alpha-theta) e^{i ell theta} - (alpha+theta) and
// B = (alpha-theta) e^{i ell theta} + (alpha+theta). Odd branches are zeros of A,
// even branches (including n=0) zeros of B. theta = 0 is a spurious zero of A for
// every alpha, so Newton for n = 0 must run on B.
struct Factor {
    double ell;
    cplx alpha;
    double sign;  // -1: factor A (odd n), +1: factor B (even n)

    cplx value(cplx theta) const {
        const cplx e = std::exp(cplx(0.0, 1.0) * ell * theta);
        return (alpha - theta) * e + sign * (alpha + theta);
    }
    cplx deriv(cplx theta) const {
        const cplx e = std::exp(cplx(0.0, 1.0) * ell * theta);
        return (-1.0 + cplx(0.0, 1.0) * ell * (alpha - theta)) * e + sign;
    }
};

double factor_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

cplx residual_g(const SectionGeometry& geom, cplx alpha, cplx theta) {
    const cplx e2 = std::exp(cplx(0.0, 2.0) * geom.ell * theta);
    const cplx am = alpha - theta;
    const cplx ap = alpha + theta;
    return am * am * e2 - ap * ap;
}

double residual_gate(cplx alpha) {
    return 1e-10 * std::max(1.0, std::norm(alpha));
}

// Damped Newton on the factor; tolerance on the step.
cplx newton(const Factor& f, cplx theta, int max_iter, bool& ok) {
    ok = false;
    for (int i = 0; i < max_iter; ++i) {
        const cplx h = f.value(theta);
        const cplx hp = f.deriv(theta);
        if (hp == cplx(0.0, 0.0)) return theta;
        cplx step = h / hp;
        double damp = 1.0;
        while (damp > 1.0 / 64.0 &&
               std::abs(f.value(theta - damp * step)) > std::abs(h)) {
            damp *= 0.5;
        }
        theta -= damp * step;
        if (std::abs(step) * damp < 1e-12 * std::max(1.0, std::abs(theta))) {
            ok = true;
            return theta;
        }
    }
    return theta;
}

bool in_strip(const SectionGeometry& geom, int n, cplx theta) {
    const double re = theta.real();
    return re > n * geom.nu && re < (n + 1) * geom.nu && theta.imag() < 0.0;
}

TransverseRoot finish_root(const SectionGeometry& geom, int n, cplx alpha, cplx theta) {
    // Re theta >= 0 convention; lambda = theta^2 is unaffected.
    if (theta.real() < 0.0) theta = -theta;
    TransverseRoot r;
    r.n = n;
    r.alpha = alpha;
    r.theta = theta;
    r.lambda = theta * theta;
    r.residual = std::abs(residual_g(geom, alpha, theta));
    return r;
}

cplx polish(const SectionGeometry& geom, int n, cplx alpha, cplx seed) {
    Factor f{geom.ell, alpha, factor_sign(n)};
    bool ok = false;
    cplx theta = newton(f, seed, 60, ok);
    if (!ok) throw NoConvergence("Newton did not converge for branch " + std::to_string(n));
    // +-theta are the same eigenvalue and the factors are even under the flip.
    if (theta.real() < 0.0) theta = -theta;
    return theta;
}

// Seed for the ground branch just off alpha = 0, from the -i upsilon slope of lambda_0.
cplx ground_seed(const SectionGeometry& geom, double alpha0) {
    return std::sqrt(cplx(0.0, -geom.upsilon * alpha0));
}

// Continuation along real alpha with step halving on strip exits.
cplx continue_to(const SectionGeometry& geom, int n, double alpha_target, double step0,
                 int max_depth) {
    double al;
    cplx theta;
    if (n == 0) {
        al = std::min(1e-6, alpha_target);
        theta = polish(geom, 0, al, ground_seed(geom, al));
    } else {
        al = 0.0;
        theta = cplx(n * geom.nu, 0.0);
    }
    double step = step0;
    int depth = 0;
    while (al < alpha_target) {
        const double next = std::min(al + step, alpha_target);
        cplx cand;
        bool jumped = false;
        try {
            cand = polish(geom, n, cplx(next, 0.0), theta);
            if (!in_strip(geom, n, cand)) jumped = true;
        } catch (const NoConvergence&) {
            jumped = true;
        }
        if (jumped) {
            if (++depth > max_depth)
                throw BranchJump("branch " + std::to_string(n) +
                                 " lost between alpha = " + std::to_string(al) + " and " +
                                 std::to_string(next));
            step *= 0.5;
            continue;
        }
        al = next;
        theta = cand;
    }
    return theta;
}

}  // namespace

TransverseRoot solve_root(const SectionGeometry& geom, int n, cplx alpha,
                          std::optional<cplx> guess) {
    if (n < 0) throw std::invalid_argument("branch index must be nonnegative");
    if (alpha == cplx(0.0, 0.0) && !guess) {
        TransverseRoot r;
        r.n = n;
        r.alpha = alpha;
        r.theta = cplx(n * geom.nu, 0.0);
        r.lambda = r.theta * r.theta;
        r.residual = std::abs(residual_g(geom, alpha, r.theta));
        return r;
    }

    cplx theta;
    if (guess) {
        theta = polish(geom, n, alpha, *guess);
    } else {
        if (alpha.imag() != 0.0 || alpha.real() < 0.0)
            throw std::invalid_argument(
                "guess required: internal continuation covers real alpha >= 0 only");
        theta = continue_to(geom, n, alpha.real(), 0.1, 12);
    }

    TransverseRoot r = finish_root(geom, n, alpha, theta);
    if (r.residual > residual_gate(alpha))
        throw NoConvergence("residual gate failed for branch " + std::to_string(n));
    if (alpha.imag() == 0.0 && alpha.real() > 0.0 && !in_strip(geom, n, r.theta))
        throw BranchJump("root left strip for branch " + std::to_string(n));
    return r;
}

cplx TransverseMode::eval(double y) const {
    const cplx th = root.theta;
    if (th == cplx(0.0, 0.0)) return cplx(1.0, 0.0);
    return std::cos(th * y) + coeff_b * std::sin(th * y);
}

cplx TransverseMode::eval_deriv(double y) const {
    const cplx th = root.theta;
    if (th == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
    return -th * std::sin(th * y) + coeff_b * th * std::cos(th * y);
}

TransverseMode make_mode(const SectionGeometry& geom, const TransverseRoot& root) {
    TransverseMode m;
    m.root = root;
    const cplx th = root.theta;
    const double ell = geom.ell;
    if (th == cplx(0.0, 0.0)) {
        m.coeff_b = cplx(0.0, 0.0);
        m.pairing = cplx(ell, 0.0);
        return m;
    }
    m.coeff_b = -cplx(0.0, 1.0) * root.alpha / th;
    const cplx b = m.coeff_b;
    const cplx s2 = std::sin(2.0 * th * ell);
    const cplx sl = std::sin(th * ell);
    m.pairing = 0.5 * ell * (1.0 + b * b) + (1.0 - b * b) * s2 / (4.0 * th) +
                b * sl * sl / th;
    return m;
}

std::vector<TransverseRoot> continuation_sweep(const SectionGeometry& geom, int n,
                                               const std::vector<double>& alpha_grid) {
    if (alpha_grid.empty() || alpha_grid.front() != 0.0)
        throw std::invalid_argument("alpha grid must start at 0");
    std::vector<TransverseRoot> out;
    out.reserve(alpha_grid.size());
    out.push_back(solve_root(geom, n, cplx(0.0, 0.0)));

    cplx theta = out.front().theta;
    double al = 0.0;
    if (n == 0 && alpha_grid.size() > 1) {
        al = std::min(1e-6, alpha_grid[1]);
        theta = polish(geom, 0, al, ground_seed(geom, al));
    }
    for (size_t k = 1; k < alpha_grid.size(); ++k) {
        const double target = alpha_grid[k];
        if (target <= al)
            throw std::invalid_argument("alpha grid must be strictly increasing");
        double step = std::min(0.1, target - al);
        int depth = 0;
        while (al < target) {
            const double next = std::min(al + step, target);
            cplx cand;
            bool jumped = false;
            try {
                cand = polish(geom, n, cplx(next, 0.0), theta);
                if (!in_strip(geom, n, cand)) jumped = true;
            } catch (const NoConvergence&) {
                jumped = true;
            }
            if (jumped) {
                if (++depth > 12)
                    throw BranchJump("sweep lost branch " + std::to_string(n) +
                                     " near alpha = " + std::to_string(next));
                step *= 0.5;
                continue;
            }
            al = next;
            theta = cand;
        }
        TransverseRoot r = finish_root(geom, n, cplx(target, 0.0), theta);
        if (r.residual > residual_gate(r.alpha))
            throw NoConvergence("residual gate failed in sweep");
        out.push_back(r);
        theta = (r.theta.real() >= 0.0) ? r.theta : -r.theta;
    }
    return out;
}

cplx lambda0_slope(const SectionGeometry& geom, double alpha_small) {
    if (!(alpha_small > 0.0 && alpha_small <= 0.05))
        throw std::invalid_argument("alpha_small must lie in (0, 0.05]");
    const TransverseRoot r = solve_root(geom, 0, cplx(alpha_small, 0.0));
    return r.lambda / alpha_small;
}

double probe_alpha(const SectionGeometry& geom, const ProbeSpec& spec, int n) {
    switch (spec.regime) {
        case Regime::LogWindow:
            return n * geom.nu + spec.beta * std::log(double(n));
        case Regime::Proportional:
            return spec.gamma * n * geom.nu;
        case Regime::Power:
            return n * geom.nu + spec.s * std::pow(double(n), spec.rho);
    }
    return 0.0;
}

ProbeResult asymptotic_probe(const SectionGeometry& geom, const ProbeSpec& spec, int n) {
    if (n < 100) throw std::invalid_argument("probe wants n >= 100");
    if (spec.regime == Regime::Proportional &&
        (spec.gamma <= 0.0 || spec.gamma == 1.0))
        throw std::invalid_argument("gamma must be positive and != 1");
    if (spec.regime == Regime::Power &&
        (spec.rho <= 0.0 || spec.rho >= 1.0 || spec.s == 0.0))
        throw std::invalid_argument("power regime wants rho in (0,1), s != 0");

    const double alpha = probe_alpha(geom, spec, n);
    if (alpha < 0.0) throw std::invalid_argument("regime parameters give negative alpha");
    const TransverseRoot root = solve_root(geom, n, cplx(alpha, 0.0));

    ProbeResult res;
    res.n = n;
    res.alpha = alpha;
    res.theta = root.theta;
    const double ell = geom.ell;
    const double nu = geom.nu;
    switch (spec.regime) {
        case Regime::LogWindow: {
            res.computed = root.theta.real();
            res.predicted =
                n * nu + nu * (1.0 - std::arg(cplx(spec.beta, 1.0 / ell)) / kPi);
            res.secondary_computed = -root.theta.imag();
            res.secondary_predicted = std::log(double(n)) / ell;
            break;
        }
        case Regime::Proportional: {
            res.computed = std::abs(root.theta.imag());
            res.predicted =
                std::abs(std::log(std::abs((1.0 + spec.gamma) / (1.0 - spec.gamma)))) / ell;
            res.secondary_computed = root.theta.real() - n * nu;
            res.secondary_predicted = (spec.gamma < 1.0) ? 0.0 : nu;
            break;
        }
        case Regime::Power: {
            res.computed = -root.theta.imag();
            res.predicted = (1.0 - spec.rho) / ell * std::log(double(n));
            res.secondary_computed = root.theta.real() - n * nu;
            res.secondary_predicted = (spec.s < 0.0) ? 0.0 : nu;
            break;
        }
    }
    res.rel_error = std::abs(res.computed - res.predicted) / std::abs(res.predicted);
    return res;
}

void write_sweep_csv(std::ostream& os, const std::vector<TransverseRoot>& roots,
                     bool header) {
    if (header) os << "n,alpha,re_theta,im_theta,residual\n";
    char line[256];
    for (const auto& r : roots) {
        std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,%.17g\n", r.n,
                      r.alpha.real(), r.theta.real(), r.theta.imag(), r.residual);
        os << line;
    }
}

}  // namespace dwg
