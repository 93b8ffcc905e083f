#include "dqca/observables.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dqca/errors.hpp"
#include "dqca/fft.hpp"
#include "dqca/spectral.hpp"

namespace dqca {

namespace {

// Signed circular distance k - k0 mapped into [-pi, pi).
double circular_delta(double k, double k0) {
    constexpr double tau = 2.0 * std::numbers::pi;
    double r = std::fmod(k - k0 + std::numbers::pi, tau);
    if (r < 0.0) r += tau;
    return r - std::numbers::pi;
}

RingFft& cached_fft(std::size_t sites) {
    thread_local std::unique_ptr<RingFft> fft;
    if (!fft || fft->sites() != sites) fft = std::make_unique<RingFft>(sites);
    return *fft;
}

double check_trace(const TrajectoryTrace& trace) {
    const std::size_t n = trace.t.size();
    if (n != trace.x_mean.size())
        throw std::invalid_argument("trace time and position arrays differ in length");
    if (n < 16) throw std::invalid_argument("trace too short to analyze");
    const double dt = trace.t[1] - trace.t[0];
    if (!(dt > 0.0)) throw std::invalid_argument("trace times must increase");
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(trace.t[i] - trace.t[i - 1] - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("trace must be uniformly sampled");
    return dt;
}

// Least-squares slope of x(t) over [i0, n).
double fit_slope(const std::vector<double>& t, const std::vector<double>& x, std::size_t i0) {
    const std::size_t n = t.size();
    double mt = 0.0, mx = 0.0;
    for (std::size_t i = i0; i < n; ++i) {
        mt += t[i];
        mx += x[i];
    }
    const double cnt = double(n - i0);
    mt /= cnt;
    mx /= cnt;
    double num = 0.0, den = 0.0;
    for (std::size_t i = i0; i < n; ++i) {
        num += (t[i] - mt) * (x[i] - mx);
        den += (t[i] - mt) * (t[i] - mt);
    }
    return num / den;
}

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p *= 2;
    return p;
}

} // namespace

double position_mean(const FieldState& s, double guard_threshold, double guard_fraction) {
    const double band = guard_band_probability(s, guard_fraction);
    if (band > guard_threshold) throw leakage_error(0, band, guard_threshold);
    const std::vector<double> rho = density(s);
    double mass = 0.0, first = 0.0;
    for (std::size_t x = 0; x < rho.size(); ++x) {
        mass += rho[x];
        first += double(x) * rho[x];
    }
    return first / mass + double(s.origin());
}

double momentum_mean(const FieldState& s) {
    const std::size_t sites = s.sites();
    const MomentumGrid grid(sites);
    std::vector<cplx> hat(2 * sites);
    cached_fft(sites).forward(s.amps().data(), hat.data());
    double mass = 0.0, first = 0.0;
    for (std::size_t j = 0; j < sites; ++j) {
        const double w = std::norm(hat[2 * j]) + std::norm(hat[2 * j + 1]);
        mass += w;
        first += grid.k(j) * w;
    }
    return first / mass;
}

double zitter_z(double k, const AutomatonParams& p) {
    const double w = dispersion(k, p);
    const double sw = std::sin(w);
    if (sw == 0.0) throw degeneracy_error("interference weight undefined at sin omega = 0");
    return p.m * std::cos(w) / (sw * sw);
}

ZitterPrediction zitter_predict(std::size_t sites, const AutomatonParams& p,
                                const WavepacketSpec& spec) {
    if (!(p.m > 0.0)) throw std::invalid_argument("interference analysis requires m > 0");
    if (std::abs(std::norm(spec.c_plus) + std::norm(spec.c_minus) - 1.0) > 1e-12)
        throw std::invalid_argument("branch weights must satisfy |c+|^2 + |c-|^2 = 1");
    const MomentumGrid grid(sites);
    double wsum = 0.0, zsum = 0.0;
    for (std::size_t j = 0; j < sites; ++j) {
        const double k = grid.k(j);
        const double d = circular_delta(k, spec.k0);
        const double g2 = std::exp(-d * d / (spec.sigma * spec.sigma));
        wsum += g2;
        zsum += g2 * zitter_z(k, p);
    }
    ZitterPrediction out;
    out.frequency = dispersion(spec.k0, p) / std::numbers::pi;
    out.drift = (std::norm(spec.c_plus) - std::norm(spec.c_minus)) * group_velocity(spec.k0, p);
    out.shift = std::imag(std::conj(spec.c_plus) * spec.c_minus) * (zsum / wsum);
    out.amplitude_bound = 2.0 / p.m + 2.0 / (p.m * p.m);
    return out;
}

ZitterMeasurement zitter_measure(const TrajectoryTrace& trace, std::optional<double> drift,
                                 double fit_t_min, double fit_t_max, double noise_floor) {
    const double dt = check_trace(trace);
    const std::size_t n = trace.t.size();
    const double slope = drift ? *drift : fit_slope(trace.t, trace.x_mean, n / 2);

    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i)
        r[i] = trace.x_mean[i] - trace.x_mean[0] - slope * (trace.t[i] - trace.t[0]);

    const std::size_t tail = std::max<std::size_t>(1, n / 5);
    double shift = 0.0;
    for (std::size_t i = n - tail; i < n; ++i) shift += r[i];
    shift /= double(tail);

    std::vector<double> y(n);
    double amplitude = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = r[i] - shift;
        amplitude = std::max(amplitude, std::abs(y[i]));
    }
    if (amplitude <= noise_floor)
        throw signal_error("trace carries no oscillation above the noise floor");

    // Extrema of the detrended residual inside the fit window.
    std::vector<double> log_t, log_a;
    std::size_t extrema = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d1 = y[i] - y[i - 1];
        const double d2 = y[i + 1] - y[i];
        if (d1 * d2 >= 0.0) continue;
        if (trace.t[i] < fit_t_min || trace.t[i] > fit_t_max) continue;
        if (std::abs(y[i]) <= noise_floor) continue;
        ++extrema;
        log_t.push_back(std::log(trace.t[i]));
        log_a.push_back(std::log(std::abs(y[i])));
    }
    if (extrema < 4)
        throw signal_error("too few oscillation extrema in the fit window (" +
                           std::to_string(extrema) + ")");
    double decay = fit_slope(log_t, log_a, 0);

    // Hann-windowed, zero-padded periodogram; parabolic peak refinement.
    const std::size_t nfft = std::max<std::size_t>(64, next_pow2(8 * n));
    std::vector<cplx> buf(nfft, 0.0), spec(nfft);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(i) / double(n - 1));
        buf[i] = y[i] * w;
    }
    RingFft fft(nfft);
    fft.forward1(buf.data(), spec.data());
    std::size_t peak = 1;
    double best = -1.0;
    for (std::size_t b = 1; b + 1 <= nfft / 2; ++b) {
        const double pw = std::norm(spec[b]);
        if (pw > best) {
            best = pw;
            peak = b;
        }
    }
    double delta = 0.0;
    if (peak > 1 && peak + 1 < nfft / 2) {
        const double pm = std::norm(spec[peak - 1]);
        const double pp = std::norm(spec[peak + 1]);
        const double den = pm - 2.0 * best + pp;
        if (den != 0.0) delta = std::clamp(0.5 * (pm - pp) / den, -0.5, 0.5);
    }
    const double frequency = (double(peak) + delta) / (double(nfft) * dt);

    return ZitterMeasurement{amplitude, frequency, shift, decay, extrema};
}

BoundCheck zitter_bound_check(const TrajectoryTrace& trace, double drift, double bound) {
    if (trace.t.size() != trace.x_mean.size() || trace.t.empty())
        throw std::invalid_argument("trace time and position arrays differ in length");
    double worst = 0.0;
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        const double r =
            trace.x_mean[i] - trace.x_mean[0] - drift * (trace.t[i] - trace.t[0]);
        worst = std::max(worst, std::abs(r));
    }
    return BoundCheck{worst, bound, worst <= bound};
}

} // namespace dqca
