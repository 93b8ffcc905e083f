// Acceptance gate: eight numbered criteria, one PASS/FAIL line each.
// Exit 0 iff every requested criterion passes.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dqca/errors.hpp"
#include "dqca/evolution.hpp"
#include "dqca/observables.hpp"
#include "dqca/scattering.hpp"
#include "dqca/spectral.hpp"
#include "dqca/state.hpp"
#include "dqca/wavepacket.hpp"
#include "reference_values.hpp"

using namespace dqca;
using std::complex;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double masses[] = {0.1, 0.2, 0.4, 0.8};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void verdict(int criterion, bool ok, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
}

void detail(const std::string& line) {
    std::printf("  %s\n", line.c_str());
    std::fflush(stdout);
}

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

// Independent matrix exponential (scaling and squaring, Taylor core).
Mat2 taylor_exp(const Mat2& a) {
    double norm = 0.0;
    for (int i = 0; i < 4; ++i) norm = std::max(norm, std::abs(a[i]));
    int squarings = 0;
    while (norm > 0.25) {
        norm /= 2.0;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);
    Mat2 x{a[0] * scale, a[1] * scale, a[2] * scale, a[3] * scale};
    Mat2 result{1.0, 0.0, 0.0, 1.0};
    Mat2 term{1.0, 0.0, 0.0, 1.0};
    for (int order = 1; order <= 24; ++order) {
        term = mul(term, x);
        for (auto& e : term) e /= double(order);
        for (int i = 0; i < 4; ++i) result[i] += term[i];
    }
    for (int s = 0; s < squarings; ++s) result = mul(result, result);
    return result;
}

// ---------------------------------------------------------------- criterion 1

bool criterion1() {
    double worst_unit = 0.0, worst_exp = 0.0, worst_eig = 0.0, worst_fd = 0.0;
    const MomentumGrid grid(4096);
    const double h = 1e-6;
    for (const double m : masses) {
        const auto p = AutomatonParams::from_mass(m);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double k = grid.k(j);
            const Mat2 u = walk_matrix(k, p);

            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                    const complex<double> dot =
                        std::conj(u[r]) * u[c] + std::conj(u[r + 2]) * u[c + 2];
                    worst_unit = std::max(worst_unit, std::abs(dot - (r == c ? 1.0 : 0.0)));
                }
            }

            const Mat2 hmat = effective_hamiltonian(k, p);
            const complex<double> mi{0.0, -1.0};
            const Mat2 e = taylor_exp({mi * hmat[0], mi * hmat[1], mi * hmat[2], mi * hmat[3]});
            for (int i = 0; i < 4; ++i) worst_exp = std::max(worst_exp, std::abs(e[i] - u[i]));

            const auto [plus, minus] = eigenspinors(k, p);
            const double omega = dispersion(k, p);
            const complex<double> lp = std::polar(1.0, -omega);
            const complex<double> lm = std::polar(1.0, omega);
            worst_eig = std::max({worst_eig,
                                  std::abs(u[0] * plus[0] + u[1] * plus[1] - lp * plus[0]),
                                  std::abs(u[2] * plus[0] + u[3] * plus[1] - lp * plus[1]),
                                  std::abs(u[0] * minus[0] + u[1] * minus[1] - lm * minus[0]),
                                  std::abs(u[2] * minus[0] + u[3] * minus[1] - lm * minus[1])});

            const double fd = (dispersion(k + h, p) - dispersion(k - h, p)) / (2.0 * h);
            worst_fd = std::max(worst_fd, std::abs(fd - group_velocity(k, p)));
        }
    }
    const bool ok =
        worst_unit <= 1e-15 && worst_exp <= 1e-12 && worst_eig <= 1e-12 && worst_fd <= 1e-8;
    verdict(1, ok,
            "spectral identities on the 4096-point grid (unitarity " + fmt(worst_unit) +
                ", exp(-iH)=U " + fmt(worst_exp) + ", eigenpairs " + fmt(worst_eig) +
                ", velocity vs finite difference " + fmt(worst_fd) + ")");
    return ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion2() {
    const auto p = AutomatonParams::from_mass(0.2);
    const std::size_t sites = 1024;
    const auto pot = PotentialProfile::zero(sites);
    std::mt19937 rng(12345);
    std::normal_distribution<double> dist(0.0, 1.0);

    double worst_step = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<cplx> amps(2 * sites);
        for (auto& a : amps) a = {dist(rng), dist(rng)};
        FieldState a(sites, amps);
        a.renormalize();
        FieldState b = a;
        step_stencil(a, p, pot);
        step_spectral(b, p);
        for (std::size_t i = 0; i < a.amps().size(); ++i)
            worst_step = std::max(worst_step, std::abs(a.amps()[i] - b.amps()[i]));
    }

    std::vector<cplx> amps(2 * sites);
    for (auto& a : amps) a = {dist(rng), dist(rng)};
    FieldState sten(sites, amps);
    sten.renormalize();
    FieldState spec = sten;
    EvolveOptions opt;
    opt.guard_enabled = false;
    opt.observe_stride = 10000;
    evolve(sten, p, pot, 10000, opt);
    opt.backend = EvolveBackend::spectral;
    evolve(spec, p, pot, 10000, opt);
    const double drift_sten = std::abs(sten.norm() - 1.0);
    const double drift_spec = std::abs(spec.norm() - 1.0);

    const bool ok = worst_step <= 1e-12 && drift_sten <= 1e-9 && drift_spec <= 1e-9;
    verdict(2, ok,
            "backend equivalence (single-step max diff " + fmt(worst_step) +
                " over 100 states, 1e4-step norm drift stencil " + fmt(drift_sten) +
                ", spectral " + fmt(drift_spec) + ")");
    return ok;
}

// ------------------------------------------------------- criteria 3 and 4

TrajectoryTrace run_trace(const AutomatonParams& p, const WavepacketSpec& spec,
                          std::size_t sites, std::size_t steps) {
    FieldState s = build_packet(sites, p, spec);
    TrajectoryTrace trace;
    EvolveOptions opt;
    opt.backend = EvolveBackend::spectral;
    const Observer record = [&](std::size_t t, const FieldState& st) {
        trace.t.push_back(double(t));
        trace.x_mean.push_back(position_mean(st));
        trace.p_mean.push_back(0.0);
    };
    evolve(s, p, PotentialProfile::zero(sites), steps, opt, {record});
    return trace;
}

WavepacketSpec top_panel_spec() {
    WavepacketSpec spec;
    spec.k0 = 0.0;
    spec.sigma = 0.025;
    spec.c_plus = 1.0 / std::numbers::sqrt2;
    spec.c_minus = cplx{0.0, 1.0 / std::numbers::sqrt2};
    spec.x0 = 2048.0;
    return spec;
}

const TrajectoryTrace& top_panel_trace() {
    static const TrajectoryTrace trace =
        run_trace(AutomatonParams::from_mass(0.15), top_panel_spec(), 4096, 3000);
    return trace;
}

bool criterion3() {
    bool ok = true;

    const auto p15 = AutomatonParams::from_mass(0.15);
    const auto spec = top_panel_spec();
    const auto pred = zitter_predict(4096, p15, spec);
    if (std::abs(pred.shift - 3.2) > 0.05 * 3.2) {
        ok = false;
        detail("predicted shift " + fmt(pred.shift) + " outside 3.2 +- 5%");
    }
    if (std::abs(pred.frequency - 0.05) > 0.10 * 0.05) {
        ok = false;
        detail("predicted frequency " + fmt(pred.frequency) + " outside 0.05 +- 10%");
    }

    const auto meas = zitter_measure(top_panel_trace(), pred.drift);
    if (std::abs(meas.shift - pred.shift) > 0.05 * std::abs(pred.shift)) {
        ok = false;
        detail("measured shift " + fmt(meas.shift) + " vs predicted " + fmt(pred.shift) +
               " beyond 5%");
    }
    if (std::abs(meas.frequency - pred.frequency) > 0.10 * pred.frequency) {
        ok = false;
        detail("measured frequency " + fmt(meas.frequency) + " vs predicted " +
               fmt(pred.frequency) + " beyond 10%");
    }

    const auto p13 = AutomatonParams::from_mass(0.13);
    WavepacketSpec drifting;
    drifting.k0 = pi / 100.0;
    drifting.sigma = 0.025;
    drifting.c_plus = std::sqrt(2.0 / 3.0);
    drifting.c_minus = 1.0 / std::numbers::sqrt3;
    drifting.x0 = 2048.0;
    const auto pred13 = zitter_predict(4096, p13, drifting);
    if (std::abs(pred13.drift - 0.08) > 0.05 * 0.08) {
        ok = false;
        detail("predicted drift " + fmt(pred13.drift) + " outside 0.08 +- 5%");
    }
    if (std::abs(pred13.drift * 800.0 - 64.0) > 0.05 * 64.0) {
        ok = false;
        detail("predicted 800-step displacement " + fmt(pred13.drift * 800.0) +
               " outside 64 +- 5%");
    }
    const auto trace13 = run_trace(p13, drifting, 4096, 800);
    const double moved = trace13.x_mean.back() - trace13.x_mean.front();
    detail("measured 800-step displacement " + fmt(moved) +
           " (informational; interference transient rides on the drift)");

    verdict(3, ok,
            "interference figures (shift " + fmt(meas.shift) + " vs " + fmt(pred.shift) +
                ", frequency " + fmt(meas.frequency) + " vs " + fmt(pred.frequency) +
                ", drift " + fmt(pred13.drift) + ")");
    return ok;
}

bool criterion4() {
    bool ok = true;
    const auto meas = zitter_measure(top_panel_trace(), 0.0);
    if (std::abs(meas.decay_exponent + 0.5) > 0.15) {
        ok = false;
        detail("envelope decay exponent " + fmt(meas.decay_exponent) + " outside -0.5 +- 0.15");
    }

    const double bound15 = 2.0 / 0.15 + 2.0 / (0.15 * 0.15);
    const auto bc15 = zitter_bound_check(top_panel_trace(), 0.0, bound15);
    if (!bc15.ok) {
        ok = false;
        detail("m=0.15 residual " + fmt(bc15.max_residual) + " exceeds bound " +
               fmt(bc15.bound));
    }

    const auto p13 = AutomatonParams::from_mass(0.13);
    WavepacketSpec drifting;
    drifting.k0 = pi / 100.0;
    drifting.sigma = 0.025;
    drifting.c_plus = std::sqrt(2.0 / 3.0);
    drifting.c_minus = 1.0 / std::numbers::sqrt3;
    drifting.x0 = 2048.0;
    const auto pred13 = zitter_predict(4096, p13, drifting);
    const auto trace13 = run_trace(p13, drifting, 4096, 800);
    const double bound13 = 2.0 / 0.13 + 2.0 / (0.13 * 0.13);
    const auto bc13 = zitter_bound_check(trace13, pred13.drift, bound13);
    if (!bc13.ok) {
        ok = false;
        detail("m=0.13 residual " + fmt(bc13.max_residual) + " exceeds bound " +
               fmt(bc13.bound));
    }

    verdict(4, ok,
            "interference asymptotics (decay exponent " + fmt(meas.decay_exponent) +
                ", residuals " + fmt(bc15.max_residual) + " <= " + fmt(bc15.bound) + " and " +
                fmt(bc13.max_residual) + " <= " + fmt(bc13.bound) + ")");
    return ok;
}

// ---------------------------------------------------------------- criterion 5

bool criterion5() {
    bool ok = true;
    const std::size_t nk = 200, nphi = 200;
    std::vector<double> k_grid(nk), phi_grid(nphi);
    for (std::size_t i = 0; i < nk; ++i) k_grid[i] = double(i + 1) * pi / double(nk + 1);
    for (std::size_t j = 0; j < nphi; ++j) phi_grid[j] = double(j) * 2.0 * pi / double(nphi);
    const double dphi = 2.0 * pi / double(nphi);

    double worst_rt = 0.0, worst_width = 0.0, worst_above = 0.0;
    for (const double m : masses) {
        const auto p = AutomatonParams::from_mass(m);
        const ScanResult result = scan(p, k_grid, phi_grid);

        for (const auto& cell : result.cells)
            worst_rt = std::max(worst_rt, std::abs(cell.R + cell.T - 1.0));

        for (const auto& row : plateau_widths(result))
            worst_width = std::max(worst_width, std::abs(row.width - row.expected));

        // Klein signature: leaving the plateau upward, reflection strictly
        // decreases at the very next sample and transmission resumes through
        // the negative band. (Further out R passes through a transmission
        // zero and rises again, so only the immediate neighbor is monotone.)
        for (std::size_t i = 0; i < nk; ++i) {
            const auto* row = &result.cells[i * nphi];
            const double omega = dispersion(k_grid[i], p);
            std::size_t j = 0;
            for (std::size_t q = 1; q < nphi; ++q)
                if (std::abs(phi_grid[q] - omega) < std::abs(phi_grid[j] - omega)) j = q;
            while (j + 1 < nphi && row[j + 1].R >= 1.0 - 1e-9) ++j;
            if (j + 1 >= nphi) {
                ok = false;
                detail("m=" + fmt(m) + " k=" + fmt(k_grid[i]) + ": no sample above the plateau");
                continue;
            }
            const auto& above = row[j + 1];
            if (above.regime != Regime::klein || !(above.R < row[j].R) || !(above.T > 0.0)) {
                ok = false;
                detail("m=" + fmt(m) + " k=" + fmt(k_grid[i]) +
                       ": no strict reflection drop into the klein regime above the plateau (R " +
                       fmt(above.R) + ", " + regime_name(above.regime) + ")");
            }
            worst_above = std::max(worst_above, above.R);
        }
    }
    if (worst_rt > 1e-10) ok = false;
    if (worst_width > dphi) ok = false;

    verdict(5, ok,
            "scattering unitarity and Klein structure (max |R+T-1| " + fmt(worst_rt) +
                ", plateau width error " + fmt(worst_width) + " <= " + fmt(dphi) +
                ", R drops strictly into the klein regime above every plateau, first sample <= " +
                fmt(worst_above) + ")");
    return ok;
}

// ---------------------------------------------------------------- criterion 6

bool criterion6() {
    bool ok = true;
    const auto p = AutomatonParams::from_mass(0.2);
    const double caption[3][2] = {{1.42, 0.25}, {1.55, 0.75}, {2.4, 0.50}};

    DynamicSpec spec;
    spec.sites = 4096;
    spec.packet.k0 = 2.0;
    spec.packet.sigma = 1.0 / 15.0;
    spec.barrier = 2 * 4096 / 3;
    spec.packet.x0 = double(spec.barrier) - 140.0;
    spec.steps = 520;

    for (const auto& [phi, target] : caption) {
        spec.phi = phi;
        const DynamicResult res = dynamic_scatter(spec, p);
        const double dyn_err = std::abs(res.R_measured - res.R_analytic);
        if (dyn_err > 0.03) {
            ok = false;
            detail("phi=" + fmt(phi) + ": |R_measured - R_analytic| = " + fmt(dyn_err) +
                   " exceeds 0.03");
        } else {
            detail("phi=" + fmt(phi) + ": R_measured " + fmt(res.R_measured) +
                   " vs analytic " + fmt(res.R_analytic) + " (diff " + fmt(dyn_err) + ")");
        }
        const double cap_err = std::abs(res.R_analytic - target);
        if (cap_err > 0.05) {
            ok = false;
            const double r04 =
                coefficients(2.0, phi, AutomatonParams::from_mass(0.4)).R;
            detail("phi=" + fmt(phi) + ": R_analytic " + fmt(res.R_analytic) +
                   " misses the stated value " + fmt(target) + " by " + fmt(cap_err) +
                   " at m=0.2 (at m=0.4 the closed form gives " + fmt(r04) +
                   "); no admissible mass reproduces all three stated values");
        }
    }

    spec.phi = 2.0;
    const DynamicResult evan = dynamic_scatter(spec, p);
    if (!(evan.R_measured > 0.99)) {
        ok = false;
        detail("phi=2 (evanescent): R_measured " + fmt(evan.R_measured) + " <= 0.99");
    } else {
        detail("phi=2 (evanescent): R_measured " + fmt(evan.R_measured) + " > 0.99");
    }

    verdict(6, ok, "dynamic vs analytic scattering at m=0.2, k0=2 (see details above)");
    return ok;
}

// ---------------------------------------------------------------- criterion 7

bool criterion7() {
    bool ok = true;
    const auto p = AutomatonParams::from_mass(0.01);
    double worst = 0.0;
    for (const auto& c : ref::schroedinger_cases) {
        const auto sol = coefficients(0.001, c.phi, p);
        const double rel = std::abs(sol.R - c.R_nr) / c.R_nr;
        worst = std::max(worst, rel);
        if (rel > 0.05) {
            ok = false;
            detail("phi=" + fmt(c.phi) + ": R " + fmt(sol.R) + " vs nonrelativistic " +
                   fmt(c.R_nr) + " (rel err " + fmt(rel) + ")");
        }
    }
    verdict(7, ok,
            "Schroedinger-limit reflection at m=0.01, k=0.001 (worst relative error " +
                fmt(worst) + " <= 0.05)");
    return ok;
}

// ---------------------------------------------------------------- criterion 8

bool criterion8() {
    double worst = 0.0;
    for (const double m : {0.001, 0.002, 0.005, 0.01, 0.02, 0.03, 0.04, 0.05}) {
        const auto p = AutomatonParams::from_mass(m);
        for (int i = 0; i <= 100; ++i) {
            const double k = -0.05 + 0.1 * double(i) / 100.0;
            const double exact = std::sqrt(k * k + m * m);
            worst = std::max(worst, std::abs(dispersion(k, p) - exact) / exact);
        }
    }
    const bool ok = worst <= 1e-3;
    verdict(8, ok,
            "Dirac-limit dispersion for m, |k| <= 0.05 (worst relative deviation " + fmt(worst) +
                " <= 1e-3)");
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    int which = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            which = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: dqca_acceptance [--criterion N]\n");
            return 2;
        }
    }
    if (which < 0 || which > 8) {
        std::fprintf(stderr, "criterion must be 1..8\n");
        return 2;
    }

    bool (*const criteria[8])() = {criterion1, criterion2, criterion3, criterion4,
                                   criterion5, criterion6, criterion7, criterion8};
    bool all = true;
    for (int c = 1; c <= 8; ++c) {
        if (which != 0 && which != c) continue;
        bool ok = false;
        try {
            ok = criteria[c - 1]();
        } catch (const std::exception& e) {
            verdict(c, false, std::string("unexpected error: ") + e.what());
        }
        all = all && ok;
    }
    return all ? 0 : 1;
}
