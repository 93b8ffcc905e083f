#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dqca/errors.hpp"
#include "dqca/observables.hpp"
#include "dqca/state.hpp"
#include "dqca/wavepacket.hpp"
#include "reference_values.hpp"

using namespace dqca;

namespace {

// Damped oscillation around a linear drift with a settled offset:
// x(t) = x0 + v t + S (1 - cos(2 pi f t) (1+t)^{-1/2}).
TrajectoryTrace synthetic_trace(std::size_t n, double x0, double v, double s_shift, double f) {
    TrajectoryTrace tr;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = double(i);
        tr.t.push_back(t);
        tr.x_mean.push_back(x0 + v * t +
                            s_shift * (1.0 - std::cos(2.0 * std::numbers::pi * f * t) /
                                                 std::sqrt(1.0 + t)));
        tr.p_mean.push_back(0.0);
    }
    return tr;
}

} // namespace

TEST_SUITE("observables") {

TEST_CASE("zitter_measure recovers shift, frequency and decay from a synthetic trace") {
    const double shift = 4.0;
    const double freq = 0.043;
    const double drift = 0.03;
    const auto tr = synthetic_trace(3001, 5.0, drift, shift, freq);

    const auto with_drift = zitter_measure(tr, drift);
    CHECK(with_drift.shift == doctest::Approx(shift).epsilon(0.02));
    CHECK(std::abs(with_drift.frequency - freq) <= 0.01 * freq);
    CHECK(std::abs(with_drift.decay_exponent + 0.5) <= 0.05);
    CHECK(with_drift.amplitude == doctest::Approx(shift).epsilon(0.02));
    CHECK(with_drift.extrema_count >= 100);

    const auto fitted = zitter_measure(tr);
    CHECK(fitted.shift == doctest::Approx(shift).epsilon(0.02));
    CHECK(std::abs(fitted.frequency - freq) <= 0.01 * freq);
}

TEST_CASE("zitter_measure rejects unusable traces") {
    TrajectoryTrace flat;
    for (int i = 0; i < 3000; ++i) {
        flat.t.push_back(double(i));
        flat.x_mean.push_back(3.0 + 0.1 * double(i));
        flat.p_mean.push_back(0.0);
    }
    CHECK_THROWS_AS(zitter_measure(flat, 0.1), signal_error);

    TrajectoryTrace tiny;
    for (int i = 0; i < 8; ++i) {
        tiny.t.push_back(double(i));
        tiny.x_mean.push_back(0.0);
        tiny.p_mean.push_back(0.0);
    }
    CHECK_THROWS_AS(zitter_measure(tiny), std::invalid_argument);

    TrajectoryTrace jagged = synthetic_trace(64, 0.0, 0.0, 1.0, 0.1);
    jagged.t[10] += 0.5;
    CHECK_THROWS_AS(zitter_measure(jagged), std::invalid_argument);
}

TEST_CASE("interference weight matches frozen values") {
    CHECK(zitter_z(0.0, AutomatonParams::from_mass(0.15)) ==
          doctest::Approx(ref::z_k0_m015).epsilon(1e-14));
    CHECK(zitter_z(0.0, AutomatonParams::from_mass(0.13)) ==
          doctest::Approx(ref::z_k0_m013).epsilon(1e-14));
}

TEST_CASE("zitter_predict matches frozen values for the balanced packet") {
    const auto p = AutomatonParams::from_mass(0.15);
    WavepacketSpec spec;
    spec.k0 = 0.0;
    spec.sigma = 0.025;
    spec.c_plus = 1.0 / std::numbers::sqrt2;
    spec.c_minus = cplx{0.0, 1.0 / std::numbers::sqrt2};
    spec.x0 = 2048.0;

    const auto pred = zitter_predict(4096, p, spec);
    CHECK(pred.shift == doctest::Approx(ref::zitter_shift_4096).epsilon(1e-12));
    CHECK(pred.frequency == doctest::Approx(ref::zitter_freq_m015).epsilon(1e-14));
    CHECK(pred.drift == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(pred.amplitude_bound ==
          doctest::Approx(2.0 / 0.15 + 2.0 / 0.0225).epsilon(1e-14));
}

TEST_CASE("zitter_predict drift follows the branch imbalance") {
    const auto p = AutomatonParams::from_mass(0.13);
    WavepacketSpec spec;
    spec.k0 = std::numbers::pi / 100.0;
    spec.sigma = 0.025;
    spec.c_plus = std::sqrt(2.0 / 3.0);
    spec.c_minus = 1.0 / std::numbers::sqrt3;
    spec.x0 = 2048.0;

    const auto pred = zitter_predict(4096, p, spec);
    CHECK(pred.drift == doctest::Approx(ref::drift_bottom).epsilon(1e-14));
    CHECK(pred.drift == doctest::Approx(ref::v_bottom / 3.0).epsilon(1e-14));
}

TEST_CASE("position and momentum means") {
    // A pure momentum mode has an exact mean momentum.
    const std::size_t sites = 64;
    std::vector<cplx> amps(2 * sites, 0.0);
    const double k = 2.0 * std::numbers::pi * 5.0 / double(sites);
    for (std::size_t x = 0; x < sites; ++x) amps[2 * x] = std::polar(1.0, k * double(x));
    FieldState mode(sites, std::move(amps));
    mode.renormalize();
    CHECK(momentum_mean(mode) == doctest::Approx(k).epsilon(1e-12));

    // A state sitting on the seam must not silently fold the mean.
    FieldState edge(64);
    edge.r(0) = 1.0;
    CHECK_THROWS_AS(position_mean(edge), leakage_error);
    CHECK(position_mean(edge, 2.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("bound check flags residuals beyond the bound") {
    TrajectoryTrace tr;
    for (int i = 0; i < 32; ++i) {
        tr.t.push_back(double(i));
        tr.x_mean.push_back(10.0 + 0.5 * double(i) + 3.0 * std::sin(0.7 * double(i)));
        tr.p_mean.push_back(0.0);
    }
    const auto ok = zitter_bound_check(tr, 0.5, 5.0);
    CHECK(ok.ok);
    CHECK(ok.max_residual <= 3.0 + 1e-12);
    CHECK(ok.bound == 5.0);

    const auto bad = zitter_bound_check(tr, 0.5, 1.0);
    CHECK_FALSE(bad.ok);
}

} // TEST_SUITE
