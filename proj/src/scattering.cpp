#include "dqca/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "dqca/errors.hpp"
#include "dqca/spectral.hpp"

namespace dqca {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::complex<double> I{0.0, 1.0};

// omega - phi mapped into [-pi, pi).
double reduced_frequency(double omega, double phi) {
    double r = std::fmod(omega - phi + pi, 2.0 * pi);
    if (r < 0.0) r += 2.0 * pi;
    return r - pi;
}

void check_incident(double k) {
    if (!(k > 0.0) || !(k < pi))
        throw std::invalid_argument("incident momentum must lie in (0, pi)");
}

} // namespace

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::propagating: return "propagating";
        case Regime::evanescent: return "evanescent";
        case Regime::klein: return "klein";
    }
    return "unknown";
}

TransmittedMode transmitted_momentum(double k, double phi, const AutomatonParams& p,
                                     double edge_margin) {
    check_incident(k);
    const double omega = dispersion(k, p);
    const double wp = reduced_frequency(omega, phi);
    const double gap = std::acos(p.n);
    TransmittedMode out{Regime::evanescent, 0.0, 0.0, omega, wp};
    if (wp > gap + edge_margin && wp < pi - gap - edge_margin) {
        out.regime = Regime::propagating;
        out.k_prime = std::acos(std::clamp(std::cos(wp) / p.n, -1.0, 1.0));
    } else if (wp < -gap - edge_margin && wp > -pi + gap + edge_margin) {
        out.regime = Regime::klein;
        out.k_prime = -std::acos(std::clamp(std::cos(wp) / p.n, -1.0, 1.0));
    } else {
        out.k_prime = std::cos(wp) > 0.0 ? 0.0 : pi;
        out.kappa = std::acosh(std::max(1.0, std::abs(std::cos(wp)) / p.n));
    }
    return out;
}

MatchingAmplitudes matching_amplitudes(double k, double phi, const AutomatonParams& p) {
    const TransmittedMode tm = transmitted_momentum(k, phi, p);
    if (tm.regime == Regime::evanescent)
        throw regime_error("no propagating transmitted mode at phi = " + std::to_string(phi));
    const double v = group_velocity(k, p);
    if (std::abs(v) < 1e-12)
        throw degeneracy_error("matching undefined at grazing incidence");
    const auto eig = eigenspinors(tm.k_prime, p);
    const Spinor& chi = tm.regime == Regime::propagating ? eig.plus : eig.minus;
    const double ps = std::sqrt(2.0) * chi[0].real();
    const double qs = std::sqrt(2.0) * chi[1].real();
    const double a = std::sqrt(1.0 - v);
    const double b = std::sqrt(1.0 + v);
    const cplx den = std::polar(1.0, -tm.k_prime) * qs * b - std::polar(1.0, k) * a * ps;
    MatchingAmplitudes out;
    out.beta = (std::polar(1.0, -k) * b * ps - std::polar(1.0, -tm.k_prime) * qs * a) / den;
    out.gamma = 2.0 * (v * std::cos(k) - I * std::sin(k)) / den;
    return out;
}

ScatteringSolution coefficients(double k, double phi, const AutomatonParams& p) {
    const TransmittedMode tm = transmitted_momentum(k, phi, p);
    ScatteringSolution sol{};
    sol.m = p.m;
    sol.k = k;
    sol.phi = phi;
    sol.regime = tm.regime;
    sol.omega_prime = tm.omega_prime;
    sol.v_in = group_velocity(k, p);
    if (tm.regime == Regime::evanescent) {
        sol.k_prime = tm.kappa;
        sol.v_out = 0.0;
        sol.R = 1.0;
        sol.T = 0.0;
        return sol;
    }
    const MatchingAmplitudes amp = matching_amplitudes(k, phi, p);
    sol.k_prime = tm.k_prime;
    sol.v_out = std::abs(group_velocity(tm.k_prime, p));
    sol.beta = amp.beta;
    sol.gamma = amp.gamma;
    sol.R = std::norm(amp.beta);
    sol.T = std::norm(amp.gamma) * sol.v_out / sol.v_in;
    return sol;
}

double eigenvector_residual(double k, double phi, const AutomatonParams& p,
                            std::size_t half_window) {
    const TransmittedMode tm = transmitted_momentum(k, phi, p);
    const MatchingAmplitudes amp = matching_amplitudes(k, phi, p);
    const auto eig_in = eigenspinors(k, p);
    const auto eig_rf = eigenspinors(-k, p);
    const auto eig_tr = eigenspinors(tm.k_prime, p);
    const Spinor& chi_i = eig_in.plus;
    const Spinor& chi_r = eig_rf.plus;
    const Spinor& chi_t = tm.regime == Regime::propagating ? eig_tr.plus : eig_tr.minus;
    const cplx gamma_inside = std::polar(1.0, phi) * amp.gamma;

    const std::ptrdiff_t w = static_cast<std::ptrdiff_t>(half_window);
    const std::size_t len = 2 * half_window;
    std::vector<cplx> psi_r(len), psi_l(len), d(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double x = double(static_cast<std::ptrdiff_t>(i) - w);
        if (x < 0.0) {
            const cplx fwd = std::polar(1.0, k * x);
            const cplx bwd = std::polar(1.0, -k * x);
            psi_r[i] = fwd * chi_i[0] + amp.beta * bwd * chi_r[0];
            psi_l[i] = fwd * chi_i[1] + amp.beta * bwd * chi_r[1];
            d[i] = 1.0;
        } else {
            const cplx t = gamma_inside * std::polar(1.0, tm.k_prime * x);
            psi_r[i] = t * chi_t[0];
            psi_l[i] = t * chi_t[1];
            d[i] = std::polar(1.0, -phi);
        }
    }
    const cplx lambda = std::polar(1.0, -tm.omega);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < len; ++i) {
        const cplx rp = p.n * d[i + 1] * psi_r[i + 1] - I * p.m * d[i] * psi_l[i];
        const cplx lp = -I * p.m * d[i] * psi_r[i] + p.n * d[i - 1] * psi_l[i - 1];
        worst = std::max(worst, std::abs(rp - lambda * psi_r[i]));
        worst = std::max(worst, std::abs(lp - lambda * psi_l[i]));
    }
    return worst;
}

ScanResult scan(const AutomatonParams& p, const std::vector<double>& k_grid,
                const std::vector<double>& phi_grid) {
    for (const double k : k_grid) check_incident(k);
    ScanResult out;
    out.m = p.m;
    out.k_grid = k_grid;
    out.phi_grid = phi_grid;
    const std::size_t nk = k_grid.size(), nphi = phi_grid.size();
    out.cells.resize(nk * nphi);

    // Worker pool over k rows; each cell is written into its own slot, so the
    // ordering is deterministic regardless of scheduling.
    auto fill_rows = [&](std::size_t first, std::size_t stride) {
        for (std::size_t ik = first; ik < nk; ik += stride)
            for (std::size_t jp = 0; jp < nphi; ++jp)
                out.cells[ik * nphi + jp] = coefficients(k_grid[ik], phi_grid[jp], p);
    };
    const std::size_t workers =
        std::min(nk, std::size_t{std::max(1u, std::thread::hardware_concurrency())});
    if (workers <= 1) {
        fill_rows(0, 1);
        return out;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                fill_rows(w, workers);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<PlateauSummary> plateau_widths(const ScanResult& scan) {
    const std::size_t nphi = scan.phi_grid.size();
    if (nphi < 2) throw std::invalid_argument("plateau extraction needs a phi grid");
    const double dphi = scan.phi_grid[1] - scan.phi_grid[0];
    const AutomatonParams p = AutomatonParams::from_mass(scan.m);
    const double expected = 2.0 * std::acos(p.n);
    std::vector<PlateauSummary> out;
    out.reserve(scan.k_grid.size());
    for (std::size_t ik = 0; ik < scan.k_grid.size(); ++ik) {
        const double omega = dispersion(scan.k_grid[ik], p);
        const ScatteringSolution* row = scan.cells.data() + ik * nphi;
        std::size_t j0 = 0;
        for (std::size_t j = 1; j < nphi; ++j)
            if (std::abs(scan.phi_grid[j] - omega) < std::abs(scan.phi_grid[j0] - omega)) j0 = j;
        auto opaque = [&](std::size_t j) { return row[j].R >= 1.0 - 1e-9; };
        std::size_t count = 0;
        if (opaque(j0)) {
            std::size_t lo = j0, hi = j0;
            while (lo > 0 && opaque(lo - 1)) --lo;
            while (hi + 1 < nphi && opaque(hi + 1)) ++hi;
            count = hi - lo + 1;
        }
        out.push_back(PlateauSummary{scan.k_grid[ik], double(count) * dphi, expected, count});
    }
    return out;
}

DynamicResult dynamic_scatter(const DynamicSpec& spec, const AutomatonParams& p) {
    if (spec.barrier == 0 || spec.barrier >= spec.sites)
        throw std::invalid_argument("barrier must lie strictly inside the ring");
    if (spec.trace_stride == 0) throw std::invalid_argument("trace_stride must be positive");

    const ScatteringSolution sol = coefficients(spec.packet.k0, spec.phi, p);
    const PotentialProfile pot = PotentialProfile::step(spec.sites, spec.phi, spec.barrier);
    FieldState s = build_packet(spec.sites, p, spec.packet);

    DynamicResult res{};
    res.R_analytic = sol.R;
    res.T_analytic = sol.T;
    res.v_out_analytic = sol.v_out;
    res.steps = spec.steps;

    double sig_l = 0.0, sig_r = 0.0;
    auto record = [&](std::size_t t, const FieldState& st) {
        const std::vector<double> rho = density(st);
        double ml = 0.0, mr = 0.0, cl = 0.0, cr = 0.0, ql = 0.0, qr = 0.0;
        for (std::size_t x = 0; x < rho.size(); ++x) {
            if (x < spec.barrier) {
                ml += rho[x];
                cl += double(x) * rho[x];
                ql += double(x) * double(x) * rho[x];
            } else {
                mr += rho[x];
                cr += double(x) * rho[x];
                qr += double(x) * double(x) * rho[x];
            }
        }
        const double eps = 1e-300;
        cl /= std::max(ml, eps);
        cr /= std::max(mr, eps);
        res.t.push_back(double(t));
        res.mass_left.push_back(ml);
        res.mass_right.push_back(mr);
        res.centroid_left.push_back(ml > 1e-12 ? cl : std::nan(""));
        res.centroid_right.push_back(mr > 1e-12 ? cr : std::nan(""));
        sig_l = std::sqrt(std::max(0.0, ql / std::max(ml, eps) - cl * cl));
        sig_r = std::sqrt(std::max(0.0, qr / std::max(mr, eps) - cr * cr));
        if (spec.snapshot_stride != 0 && spec.on_snapshot && t % spec.snapshot_stride == 0)
            spec.on_snapshot(t, st);
    };

    EvolveOptions opt = spec.evolve;
    opt.observe_stride = spec.trace_stride;
    evolve(s, p, pot, spec.steps, opt, {record});

    res.R_measured = res.mass_left.back();
    res.T_measured = res.mass_right.back();

    const double ml = res.mass_left.back(), mr = res.mass_right.back();
    if (ml > 1e-3 && mr > 1e-3) {
        const double sep = res.centroid_right.back() - res.centroid_left.back();
        const double widths = std::hypot(sig_l, sig_r);
        if (!(sep >= 6.0 * widths))
            throw inconclusive_error("reflected and transmitted lobes not separated (" +
                                     std::to_string(sep) + " sites, need " +
                                     std::to_string(6.0 * widths) + ")");
    }

    // Transmitted-lobe velocity from the late-time centroid trend.
    res.v_out_measured = std::nan("");
    const std::size_t nobs = res.t.size();
    std::vector<double> ts, cs;
    for (std::size_t i = nobs - std::min(nobs, std::max<std::size_t>(4, (2 * nobs) / 5));
         i < nobs; ++i) {
        if (res.mass_right[i] > 1e-3 && std::isfinite(res.centroid_right[i])) {
            ts.push_back(res.t[i]);
            cs.push_back(res.centroid_right[i]);
        }
    }
    if (ts.size() >= 4) {
        double mt = 0.0, mc = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            mt += ts[i];
            mc += cs[i];
        }
        mt /= double(ts.size());
        mc /= double(ts.size());
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            num += (ts[i] - mt) * (cs[i] - mc);
            den += (ts[i] - mt) * (ts[i] - mt);
        }
        if (den > 0.0) res.v_out_measured = num / den;
    }
    return res;
}

} // namespace dqca
