#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "dqca/errors.hpp"
#include "dqca/spectral.hpp"
#include "reference_values.hpp"

using namespace dqca;
using std::complex;

namespace {

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Mat2 adjoint(const Mat2& a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

double max_entry_diff(const Mat2& a, const Mat2& b) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

// Independent matrix exponential: scaling and squaring with a Taylor series.
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

constexpr double masses[] = {0.1, 0.2, 0.4, 0.8};

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("dispersion and velocity reproduce frozen reference values") {
    const auto p02 = AutomatonParams::from_mass(0.2);
    CHECK(p02.n == doctest::Approx(ref::n_m020).epsilon(1e-16));
    CHECK(dispersion(2.0, p02) == doctest::Approx(ref::omega_k2_m020).epsilon(1e-15));
    CHECK(group_velocity(2.0, p02) == doctest::Approx(ref::v_k2_m020).epsilon(1e-15));

    const auto p04 = AutomatonParams::from_mass(0.4);
    CHECK(dispersion(2.0, p04) == doctest::Approx(ref::omega_k2_m040).epsilon(1e-15));
    CHECK(group_velocity(2.0, p04) == doctest::Approx(ref::v_k2_m040).epsilon(1e-15));

    const auto p015 = AutomatonParams::from_mass(0.15);
    CHECK(dispersion(0.0, p015) == doctest::Approx(ref::omega_k0_m015).epsilon(1e-15));

    const auto p013 = AutomatonParams::from_mass(0.13);
    CHECK(group_velocity(std::numbers::pi / 100.0, p013) ==
          doctest::Approx(ref::v_bottom).epsilon(1e-15));
}

TEST_CASE("walk matrix is unitary across the band") {
    const Mat2 id{1.0, 0.0, 0.0, 1.0};
    for (const double m : masses) {
        const auto p = AutomatonParams::from_mass(m);
        for (int i = 0; i <= 64; ++i) {
            const double k = -std::numbers::pi + 2.0 * std::numbers::pi * i / 64.0;
            const Mat2 u = walk_matrix(k, p);
            CHECK(max_entry_diff(mul(adjoint(u), u), id) <= 1e-15);
        }
    }
}

TEST_CASE("eigenspinors satisfy the eigenvalue equations and the gauge") {
    for (const double m : masses) {
        const auto p = AutomatonParams::from_mass(m);
        for (int i = 1; i < 48; ++i) {
            const double k = -std::numbers::pi + 2.0 * std::numbers::pi * i / 48.0;
            const Mat2 u = walk_matrix(k, p);
            const auto [plus, minus] = eigenspinors(k, p);
            const double omega = dispersion(k, p);
            const complex<double> lam_plus = std::polar(1.0, -omega);
            const complex<double> lam_minus = std::polar(1.0, omega);

            CHECK(std::abs(u[0] * plus[0] + u[1] * plus[1] - lam_plus * plus[0]) <= 1e-12);
            CHECK(std::abs(u[2] * plus[0] + u[3] * plus[1] - lam_plus * plus[1]) <= 1e-12);
            CHECK(std::abs(u[0] * minus[0] + u[1] * minus[1] - lam_minus * minus[0]) <= 1e-12);
            CHECK(std::abs(u[2] * minus[0] + u[3] * minus[1] - lam_minus * minus[1]) <= 1e-12);

            CHECK(std::abs(std::norm(plus[0]) + std::norm(plus[1]) - 1.0) <= 1e-14);
            CHECK(std::abs(std::norm(minus[0]) + std::norm(minus[1]) - 1.0) <= 1e-14);
            CHECK(std::abs(std::conj(plus[0]) * minus[0] + std::conj(plus[1]) * minus[1]) <=
                  1e-14);
            CHECK(plus[0].imag() == 0.0);
            CHECK(plus[0].real() >= 0.0);
        }
    }
}

TEST_CASE("the effective Hamiltonian generates the walk") {
    for (const double m : masses) {
        const auto p = AutomatonParams::from_mass(m);
        for (int i = 0; i <= 32; ++i) {
            const double k = -std::numbers::pi + 2.0 * std::numbers::pi * i / 32.0;
            const Mat2 h = effective_hamiltonian(k, p);
            CHECK(std::abs(h[0] + h[3]) <= 1e-14);
            CHECK(std::abs(h[1] - std::conj(h[2])) <= 1e-14);
            const Mat2 mih{-complex<double>{0.0, 1.0} * h[0], -complex<double>{0.0, 1.0} * h[1],
                           -complex<double>{0.0, 1.0} * h[2], -complex<double>{0.0, 1.0} * h[3]};
            CHECK(max_entry_diff(taylor_exp(mih), walk_matrix(k, p)) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(effective_hamiltonian(1.0, AutomatonParams{}), std::invalid_argument);
}

TEST_CASE("group velocity matches a central difference of the dispersion") {
    const double h = 1e-6;
    for (const double m : masses) {
        const auto p = AutomatonParams::from_mass(m);
        for (int i = 0; i <= 40; ++i) {
            const double k = -3.0 + 6.0 * i / 40.0;
            const double fd = (dispersion(k + h, p) - dispersion(k - h, p)) / (2.0 * h);
            CHECK(group_velocity(k, p) == doctest::Approx(fd).epsilon(1e-8));
            CHECK(std::abs(group_velocity(k, p)) <= p.n + 1e-15);
        }
    }
}

TEST_CASE("massless degeneracy is rejected, massless interior is fine") {
    const AutomatonParams massless{};
    CHECK_THROWS_AS(eigenspinors(0.0, massless), degeneracy_error);
    CHECK_THROWS_AS(group_velocity(0.0, massless), degeneracy_error);
    const auto [plus, minus] = eigenspinors(1.0, massless);
    CHECK(std::abs(plus[0]) <= 1e-15);
    CHECK(plus[1].real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(minus[0].real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("momentum grid is the DFT bin layout") {
    const MomentumGrid grid(8);
    CHECK(grid.size() == 8);
    CHECK(grid.k(0) == 0.0);
    CHECK(grid.k(1) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-15));
    CHECK(grid.k(4) == doctest::Approx(-std::numbers::pi).epsilon(1e-15));
    CHECK(grid.k(7) == doctest::Approx(-std::numbers::pi / 4.0).epsilon(1e-15));
    CHECK_THROWS_AS(MomentumGrid(7), std::invalid_argument);
    CHECK_THROWS_AS(MomentumGrid(2), std::invalid_argument);
}

TEST_CASE("mode data bundles the spectral quantities") {
    const auto p = AutomatonParams::from_mass(0.3);
    const ModeData d = mode_data(0.7, p);
    CHECK(d.omega == dispersion(0.7, p));
    CHECK(d.v == group_velocity(0.7, p));
    CHECK(d.plus == eigenspinors(0.7, p).plus);
}

} // TEST_SUITE
