#include "sdlab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace sdlab::fft {
namespace {

struct FftwDeleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using Buffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

Buffer make_buffer(std::size_t n) {
    auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!p) throw Error("fftw_malloc failed");
    return Buffer(p);
}

// Plans are created once per (shape, sign) on aligned scratch and executed
// through the new-array interface on fftw_malloc'd buffers, which keeps the
// codelet choice (and therefore the rounding) identical across calls.
class PlanCache {
public:
    fftw_plan get(const Shape& s, int sign) {
        std::lock_guard lock(mu_);
        auto key = std::make_tuple(s.dim, s.n0, s.n1, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        auto scratch = make_buffer(s.size());
        fftw_plan plan = nullptr;
        if (s.dim == 1) {
            plan = fftw_plan_dft_1d(static_cast<int>(s.n0), scratch.get(), scratch.get(), sign, FFTW_ESTIMATE);
        } else {
            // FFTW is row-major; our axis 0 is the fastest one.
            plan = fftw_plan_dft_2d(static_cast<int>(s.n1), static_cast<int>(s.n0), scratch.get(), scratch.get(),
                                    sign, FFTW_ESTIMATE);
        }
        if (!plan) throw Error("fftw planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }

private:
    std::mutex mu_;
    std::map<std::tuple<int, std::int64_t, std::int64_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(std::span<cplx> data, const Shape& shape, int sign) {
    if (data.size() != shape.size()) throw Error("fft: data size does not match shape");
    fftw_plan plan = cache().get(shape, sign);
    auto buf = make_buffer(shape.size());
    std::memcpy(buf.get(), data.data(), sizeof(cplx) * data.size());
    fftw_execute_dft(plan, buf.get(), buf.get());
    std::memcpy(static_cast<void*>(data.data()), buf.get(), sizeof(cplx) * data.size());
}

}  // namespace

void forward(std::span<cplx> data, const Shape& shape) { execute(data, shape, FFTW_FORWARD); }

void inverse(std::span<cplx> data, const Shape& shape) {
    execute(data, shape, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(shape.size());
    for (auto& v : data) v *= scale;
}

}  // namespace sdlab::fft
