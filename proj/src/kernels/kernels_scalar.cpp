#include "kernels_internal.hpp"

// Reference kernels. Site x occupies in[4x .. 4x+3] = [Re r, Im r, Re l, Im l];
// `count` arguments count complex values (2 doubles each).

namespace dqca::kernels {

namespace {

void step_free_scalar(const double* in, double* out, std::size_t sites, double n, double m) {
    for (std::size_t x = 0; x < sites; ++x) {
        const std::size_t xp = x + 1 == sites ? 0 : x + 1;
        const std::size_t xm = x == 0 ? sites - 1 : x - 1;
        out[4 * x + 0] = n * in[4 * xp + 0] + m * in[4 * x + 3];
        out[4 * x + 1] = n * in[4 * xp + 1] - m * in[4 * x + 2];
        out[4 * x + 2] = m * in[4 * x + 1] + n * in[4 * xm + 2];
        out[4 * x + 3] = -m * in[4 * x + 0] + n * in[4 * xm + 3];
    }
}

void step_phase_scalar(const double* in, const double* dphase, double* out, std::size_t sites,
                       double n, double m) {
    // u(x) = d(x) psi(x) component-wise, then the same hop as the free step.
    auto ur_re = [&](std::size_t x) {
        return dphase[2 * x] * in[4 * x + 0] - dphase[2 * x + 1] * in[4 * x + 1];
    };
    auto ur_im = [&](std::size_t x) {
        return dphase[2 * x] * in[4 * x + 1] + dphase[2 * x + 1] * in[4 * x + 0];
    };
    auto ul_re = [&](std::size_t x) {
        return dphase[2 * x] * in[4 * x + 2] - dphase[2 * x + 1] * in[4 * x + 3];
    };
    auto ul_im = [&](std::size_t x) {
        return dphase[2 * x] * in[4 * x + 3] + dphase[2 * x + 1] * in[4 * x + 2];
    };
    for (std::size_t x = 0; x < sites; ++x) {
        const std::size_t xp = x + 1 == sites ? 0 : x + 1;
        const std::size_t xm = x == 0 ? sites - 1 : x - 1;
        out[4 * x + 0] = n * ur_re(xp) + m * ul_im(x);
        out[4 * x + 1] = n * ur_im(xp) - m * ul_re(x);
        out[4 * x + 2] = m * ur_im(x) + n * ul_re(xm);
        out[4 * x + 3] = -m * ur_re(x) + n * ul_im(xm);
    }
}

void mode_apply_scalar(double* hat, const double* mats, std::size_t modes) {
    for (std::size_t j = 0; j < modes; ++j) {
        double* h = hat + 4 * j;
        const double* a = mats + 8 * j;
        const double rr = h[0], ri = h[1], lr = h[2], li = h[3];
        h[0] = a[0] * rr - a[1] * ri + a[2] * lr - a[3] * li;
        h[1] = a[0] * ri + a[1] * rr + a[2] * li + a[3] * lr;
        h[2] = a[4] * rr - a[5] * ri + a[6] * lr - a[7] * li;
        h[3] = a[4] * ri + a[5] * rr + a[6] * li + a[7] * lr;
    }
}

double norm_sq_scalar(const double* z, std::size_t count) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 2 * count; ++i) acc += z[i] * z[i];
    return acc;
}

void density_scalar(const double* amps, double* rho, std::size_t sites) {
    for (std::size_t x = 0; x < sites; ++x) {
        const double* a = amps + 4 * x;
        rho[x] = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
    }
}

void scale_scalar(double* z, std::size_t count, double s) {
    for (std::size_t i = 0; i < 2 * count; ++i) z[i] *= s;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops table{step_free_scalar, step_phase_scalar, mode_apply_scalar,
                           norm_sq_scalar,   density_scalar,    scale_scalar};
    return table;
}

} // namespace dqca::kernels
