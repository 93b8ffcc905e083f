#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace dqca {

// Stride-2 transforms for the interleaved two-component ring state: both
// spinor components go through one plan. The forward kernel is
// sum_x psi(x) e^{-i k x}; backward is its unnormalized inverse. Data is
// copied through internal FFTW buffers so caller alignment never changes
// plan behavior; plans use FFTW_ESTIMATE, which is deterministic.
class RingFft {
public:
    explicit RingFft(std::size_t sites);
    ~RingFft();
    RingFft(const RingFft&) = delete;
    RingFft& operator=(const RingFft&) = delete;

    std::size_t sites() const noexcept { return sites_; }

    // amps and hat are interleaved arrays of 2*sites complex values.
    void forward(const std::complex<double>* amps, std::complex<double>* hat);
    void backward(const std::complex<double>* hat, std::complex<double>* amps);

    // Single-component transforms of length `sites` (contiguous arrays).
    void forward1(const std::complex<double>* in, std::complex<double>* out);
    void backward1(const std::complex<double>* in, std::complex<double>* out);

private:
    struct Impl;
    std::size_t sites_;
    std::unique_ptr<Impl> impl_;
};

} // namespace dqca
