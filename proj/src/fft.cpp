#include "dqca/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <stdexcept>

namespace dqca {

struct RingFft::Impl {
    fftw_complex* pair_buf = nullptr;    // 2N values, interleaved two-component
    fftw_complex* single_buf = nullptr;  // N values
    fftw_plan pair_fwd{}, pair_bwd{}, single_fwd{}, single_bwd{};

    explicit Impl(std::size_t n) {
        pair_buf = fftw_alloc_complex(2 * n);
        single_buf = fftw_alloc_complex(n);
        if (!pair_buf || !single_buf) throw std::bad_alloc();
        const int ni = static_cast<int>(n);
        // Both spinor components in one plan: stride 2, starts one value apart.
        pair_fwd = fftw_plan_many_dft(1, &ni, 2, pair_buf, nullptr, 2, 1, pair_buf, nullptr, 2,
                                      1, FFTW_FORWARD, FFTW_ESTIMATE);
        pair_bwd = fftw_plan_many_dft(1, &ni, 2, pair_buf, nullptr, 2, 1, pair_buf, nullptr, 2,
                                      1, FFTW_BACKWARD, FFTW_ESTIMATE);
        single_fwd = fftw_plan_dft_1d(ni, single_buf, single_buf, FFTW_FORWARD, FFTW_ESTIMATE);
        single_bwd = fftw_plan_dft_1d(ni, single_buf, single_buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~Impl() {
        fftw_destroy_plan(pair_fwd);
        fftw_destroy_plan(pair_bwd);
        fftw_destroy_plan(single_fwd);
        fftw_destroy_plan(single_bwd);
        fftw_free(pair_buf);
        fftw_free(single_buf);
    }
};

RingFft::RingFft(std::size_t sites) : sites_(sites) {
    if (sites < 4 || sites % 2 != 0)
        throw std::invalid_argument("ring transform needs an even size >= 4");
    impl_ = std::make_unique<Impl>(sites);
}

RingFft::~RingFft() = default;

namespace {

void run(fftw_plan plan, fftw_complex* buf, const std::complex<double>* in,
         std::complex<double>* out, std::size_t count) {
    // std::complex<double> is layout-compatible with fftw_complex.
    std::memcpy(static_cast<void*>(buf), static_cast<const void*>(in),
                count * sizeof(fftw_complex));
    fftw_execute(plan);
    std::memcpy(static_cast<void*>(out), static_cast<const void*>(buf),
                count * sizeof(fftw_complex));
}

} // namespace

void RingFft::forward(const std::complex<double>* amps, std::complex<double>* hat) {
    run(impl_->pair_fwd, impl_->pair_buf, amps, hat, 2 * sites_);
}

void RingFft::backward(const std::complex<double>* hat, std::complex<double>* amps) {
    run(impl_->pair_bwd, impl_->pair_buf, hat, amps, 2 * sites_);
}

void RingFft::forward1(const std::complex<double>* in, std::complex<double>* out) {
    run(impl_->single_fwd, impl_->single_buf, in, out, sites_);
}

void RingFft::backward1(const std::complex<double>* in, std::complex<double>* out) {
    run(impl_->single_bwd, impl_->single_buf, in, out, sites_);
}

} // namespace dqca
