#include <immintrin.h>

#include <utility>

#include "kernels_internal.hpp"

// AVX2/FMA kernels. One site (4 doubles) is one 256-bit lane group:
// [Re r, Im r, Re l, Im l]. Ring edges fall back to the scalar formulas so
// the vector loop never wraps.

namespace dqca::kernels {

namespace {

// [v0 v1 v2 v3] -> [v3 v2 v1 v0]
inline __m256d reverse4(__m256d v) {
    return _mm256_permute_pd(_mm256_permute2f128_pd(v, v, 0x01), 0b0101);
}

// [v0 v1 v2 v3] -> [v1 v0 v3 v2]
inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// Complex multiply of both spinor components of one site by d = dr + i di.
inline __m256d phase_mul(__m256d v, double dr, double di) {
    const __m256d re = _mm256_mul_pd(v, _mm256_set1_pd(dr));
    const __m256d im = _mm256_mul_pd(swap_pairs(v), _mm256_set1_pd(di));
    return _mm256_addsub_pd(re, im);
}

// n * [r(x+1), l(x-1)] + [m Im l(x), -m Re l(x), m Im r(x), -m Re r(x)]
inline __m256d hop(__m256d u_prev, __m256d u_cur, __m256d u_next, __m256d nvec, __m256d msign) {
    const __m256d shifted = _mm256_permute2f128_pd(u_next, u_prev, 0x30);
    return _mm256_fmadd_pd(nvec, shifted, _mm256_mul_pd(msign, reverse4(u_cur)));
}

void step_free_avx2(const double* in, double* out, std::size_t sites, double n, double m) {
    if (sites < 4) {
        scalar_ops().step_free(in, out, sites, n, m);
        return;
    }
    const __m256d nvec = _mm256_set1_pd(n);
    const __m256d msign = _mm256_set_pd(-m, m, -m, m);
    __m256d u_prev = _mm256_loadu_pd(in);
    __m256d u_cur = _mm256_loadu_pd(in + 4);
    for (std::size_t x = 1; x + 1 < sites; ++x) {
        const __m256d u_next = _mm256_loadu_pd(in + 4 * x + 4);
        _mm256_storeu_pd(out + 4 * x, hop(u_prev, u_cur, u_next, nvec, msign));
        u_prev = u_cur;
        u_cur = u_next;
    }
    const std::size_t last = sites - 1;
    out[0] = n * in[4] + m * in[3];
    out[1] = n * in[5] - m * in[2];
    out[2] = m * in[1] + n * in[4 * last + 2];
    out[3] = -m * in[0] + n * in[4 * last + 3];
    out[4 * last + 0] = n * in[0] + m * in[4 * last + 3];
    out[4 * last + 1] = n * in[1] - m * in[4 * last + 2];
    out[4 * last + 2] = m * in[4 * last + 1] + n * in[4 * last - 2];
    out[4 * last + 3] = -m * in[4 * last + 0] + n * in[4 * last - 1];
}

void step_phase_avx2(const double* in, const double* dphase, double* out, std::size_t sites,
                     double n, double m) {
    if (sites < 4) {
        scalar_ops().step_phase(in, dphase, out, sites, n, m);
        return;
    }
    const __m256d nvec = _mm256_set1_pd(n);
    const __m256d msign = _mm256_set_pd(-m, m, -m, m);
    auto u_at = [&](std::size_t x) {
        return phase_mul(_mm256_loadu_pd(in + 4 * x), dphase[2 * x], dphase[2 * x + 1]);
    };
    __m256d u_prev = u_at(0);
    __m256d u_cur = u_at(1);
    for (std::size_t x = 1; x + 1 < sites; ++x) {
        const __m256d u_next = u_at(x + 1);
        _mm256_storeu_pd(out + 4 * x, hop(u_prev, u_cur, u_next, nvec, msign));
        u_prev = u_cur;
        u_cur = u_next;
    }
    // Scalar edges: u_c(x) = d(x) psi_c(x) spelled out component-wise.
    auto u = [&](std::size_t x, std::size_t c) {
        const double dr = dphase[2 * x], di = dphase[2 * x + 1];
        const double re = in[4 * x + 2 * c], im = in[4 * x + 2 * c + 1];
        return std::pair<double, double>{dr * re - di * im, dr * im + di * re};
    };
    const std::size_t last = sites - 1;
    for (const std::size_t x : {std::size_t{0}, last}) {
        const auto [urp_re, urp_im] = u(x == last ? 0 : x + 1, 0);
        const auto [ulm_re, ulm_im] = u(x == 0 ? last : x - 1, 1);
        const auto [ur_re, ur_im] = u(x, 0);
        const auto [ul_re, ul_im] = u(x, 1);
        out[4 * x + 0] = n * urp_re + m * ul_im;
        out[4 * x + 1] = n * urp_im - m * ul_re;
        out[4 * x + 2] = m * ur_im + n * ulm_re;
        out[4 * x + 3] = -m * ur_re + n * ulm_im;
    }
}

void mode_apply_avx2(double* hat, const double* mats, std::size_t modes) {
    for (std::size_t j = 0; j < modes; ++j) {
        double* hp = hat + 4 * j;
        const double* a = mats + 8 * j;
        const __m256d h = _mm256_loadu_pd(hp);
        const __m256d m0 = _mm256_loadu_pd(a);      // [a00r a00i a01r a01i]
        const __m256d m1 = _mm256_loadu_pd(a + 4);  // [a10r a10i a11r a11i]
        const __m256d re0 = _mm256_movedup_pd(m0);  // [a00r a00r a01r a01r]
        const __m256d re1 = _mm256_movedup_pd(m1);
        const __m256d im0 = _mm256_permute_pd(m0, 0b1111);  // [a00i a00i a01i a01i]
        const __m256d im1 = _mm256_permute_pd(m1, 0b1111);
        const __m256d diag_re = _mm256_blend_pd(re0, re1, 0b1100);          // [a00r . a11r .]
        const __m256d cross_re = _mm256_permute2f128_pd(re0, re1, 0x21);    // [a01r . a10r .]
        const __m256d diag_im = _mm256_blend_pd(im0, im1, 0b1100);
        const __m256d cross_im = _mm256_permute2f128_pd(im0, im1, 0x21);
        const __m256d h_cross = _mm256_permute2f128_pd(h, h, 0x01);  // [lr li rr ri]
        const __m256d even = _mm256_fmadd_pd(diag_re, h, _mm256_mul_pd(cross_re, h_cross));
        const __m256d odd = _mm256_fmadd_pd(diag_im, swap_pairs(h),
                                            _mm256_mul_pd(cross_im, swap_pairs(h_cross)));
        _mm256_storeu_pd(hp, _mm256_addsub_pd(even, odd));
    }
}

double norm_sq_avx2(const double* z, std::size_t count) {
    const std::size_t total = 2 * count;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= total; i += 4) {
        const __m256d v = _mm256_loadu_pd(z + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    const __m128d half = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    double s = _mm_cvtsd_f64(_mm_add_sd(half, _mm_unpackhi_pd(half, half)));
    for (; i < total; ++i) s += z[i] * z[i];
    return s;
}

void density_avx2(const double* amps, double* rho, std::size_t sites) {
    std::size_t x = 0;
    for (; x + 4 <= sites; x += 4) {
        const double* a = amps + 4 * x;
        const __m256d v0 = _mm256_loadu_pd(a);
        const __m256d v1 = _mm256_loadu_pd(a + 4);
        const __m256d v2 = _mm256_loadu_pd(a + 8);
        const __m256d v3 = _mm256_loadu_pd(a + 12);
        const __m256d t01 = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
        const __m256d t23 = _mm256_hadd_pd(_mm256_mul_pd(v2, v2), _mm256_mul_pd(v3, v3));
        const __m256d lo = _mm256_permute2f128_pd(t01, t23, 0x20);
        const __m256d hi = _mm256_permute2f128_pd(t01, t23, 0x31);
        _mm256_storeu_pd(rho + x, _mm256_add_pd(lo, hi));
    }
    for (; x < sites; ++x) {
        const double* a = amps + 4 * x;
        rho[x] = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
    }
}

void scale_avx2(double* z, std::size_t count, double s) {
    const std::size_t total = 2 * count;
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= total; i += 4)
        _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(z + i), sv));
    for (; i < total; ++i) z[i] *= s;
}

} // namespace

const Ops& avx2_ops() {
    static const Ops table{step_free_avx2, step_phase_avx2, mode_apply_avx2,
                           norm_sq_avx2,   density_avx2,    scale_avx2};
    return table;
}

} // namespace dqca::kernels
