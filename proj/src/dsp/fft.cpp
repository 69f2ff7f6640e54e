#include "eog/dsp/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace eog::dsp {

namespace {

template <typename T>
struct FftwFree {
    void operator()(T* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree<T>>;

template <typename T>
FftwBuffer<T> allocate(std::size_t n) {
    return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1))));
}

enum class PlanKind { r2c, c2r, forward, backward };

// Plans are created once per (kind, size) and executed with the new-array interface.
// Plan creation is not thread-safe in FFTW, execution is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(PlanKind kind, std::size_t n) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(kind, n);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const int size = static_cast<int>(n);
        fftw_plan plan = nullptr;
        auto real = allocate<double>(n);
        auto cplx = allocate<fftw_complex>(n);
        auto cplx2 = allocate<fftw_complex>(n);
        switch (kind) {
            case PlanKind::r2c:
                plan = fftw_plan_dft_r2c_1d(size, real.get(), cplx.get(), FFTW_ESTIMATE);
                break;
            case PlanKind::c2r:
                plan = fftw_plan_dft_c2r_1d(size, cplx.get(), real.get(), FFTW_ESTIMATE);
                break;
            case PlanKind::forward:
                plan = fftw_plan_dft_1d(size, cplx.get(), cplx2.get(), FFTW_FORWARD, FFTW_ESTIMATE);
                break;
            case PlanKind::backward:
                plan = fftw_plan_dft_1d(size, cplx.get(), cplx2.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
                break;
        }
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<PlanKind, std::size_t>, fftw_plan> plans_;
};

std::vector<Complex> complex_transform(std::span<const Complex> x, PlanKind kind) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    auto in = allocate<fftw_complex>(n);
    auto out = allocate<fftw_complex>(n);
    for (std::size_t i = 0; i < n; ++i) {
        in[i][0] = x[i].real();
        in[i][1] = x[i].imag();
    }
    fftw_execute_dft(PlanCache::instance().get(kind, n), in.get(), out.get());
    std::vector<Complex> result(n);
    const double scale = kind == PlanKind::backward ? 1.0 / static_cast<double>(n) : 1.0;
    for (std::size_t i = 0; i < n; ++i) result[i] = Complex(out[i][0], out[i][1]) * scale;
    return result;
}

}  // namespace

std::vector<Complex> rfft(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    const std::size_t bins = n / 2 + 1;
    auto in = allocate<double>(n);
    auto out = allocate<fftw_complex>(bins);
    std::copy(x.begin(), x.end(), in.get());
    fftw_execute_dft_r2c(PlanCache::instance().get(PlanKind::r2c, n), in.get(), out.get());
    std::vector<Complex> result(bins);
    for (std::size_t k = 0; k < bins; ++k) result[k] = Complex(out[k][0], out[k][1]);
    return result;
}

std::vector<double> irfft(std::span<const Complex> bins, std::size_t n) {
    if (n == 0) return {};
    const std::size_t nb = n / 2 + 1;
    auto in = allocate<fftw_complex>(nb);
    auto out = allocate<double>(n);
    for (std::size_t k = 0; k < nb; ++k) {
        const Complex v = k < bins.size() ? bins[k] : Complex{};
        in[k][0] = v.real();
        in[k][1] = v.imag();
    }
    // c2r destroys its input; the buffer is ours.
    fftw_execute_dft_c2r(PlanCache::instance().get(PlanKind::c2r, n), in.get(), out.get());
    std::vector<double> result(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) result[i] = out[i] * scale;
    return result;
}

std::vector<Complex> fft(std::span<const Complex> x) { return complex_transform(x, PlanKind::forward); }

std::vector<Complex> ifft(std::span<const Complex> x) { return complex_transform(x, PlanKind::backward); }

}  // namespace eog::dsp
