#include "jrc/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace jrc::fft {
namespace {

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mu_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto* a = fftw_alloc_complex(n);
        auto* b = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), a, b, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(a);
        fftw_free(b);
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mu_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void run(std::span<const cdouble> in, std::span<cdouble> out, int sign) {
    require(in.size() == out.size(), "fft: input and output sizes differ");
    require(!in.empty(), "fft: empty transform");
    const std::size_t n = in.size();
    fftw_plan p = cache().get(n, sign);
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    if (src == dst) {
        // plans are out-of-place
        CVec tmp(in.begin(), in.end());
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()), dst);
    } else {
        fftw_execute_dft(p, src, dst);
    }
}

}  // namespace

void forward(std::span<const cdouble> in, std::span<cdouble> out) { run(in, out, FFTW_FORWARD); }
void inverse(std::span<const cdouble> in, std::span<cdouble> out) { run(in, out, FFTW_BACKWARD); }

CVec forward(std::span<const cdouble> in) {
    CVec out(in.size());
    forward(in, out);
    return out;
}

CVec inverse(std::span<const cdouble> in) {
    CVec out(in.size());
    inverse(in, out);
    return out;
}

}  // namespace jrc::fft
