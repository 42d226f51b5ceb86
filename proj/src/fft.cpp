#include "margconv/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

#include "margconv/error.hpp"

namespace margconv::fft {

namespace {

enum class Kind { r2c2, c2r2, r2c1, c2r1 };

template <class T>
struct Buffer {
    explicit Buffer(std::size_t n) : ptr(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)))) {
        if (!ptr) throw Error("fftw_malloc failed");
    }
    ~Buffer() { fftw_free(ptr); }
    Buffer(const Buffer&) = delete;
    Buffer& operator=(const Buffer&) = delete;
    T* ptr;
};

class PlanStore {
public:
    ~PlanStore() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(Kind kind, int rows, int cols) {
        std::lock_guard lock(mu_);
        const auto key = std::make_tuple(kind, rows, cols);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        // Planning happens on scratch arrays; FFTW_ESTIMATE never touches their contents.
        const std::size_t nreal = static_cast<std::size_t>(rows) * cols;
        const std::size_t ncplx = static_cast<std::size_t>(rows) * (cols / 2 + 1);
        Buffer<double> re(nreal);
        Buffer<fftw_complex> cx(ncplx);
        fftw_plan p = nullptr;
        switch (kind) {
            case Kind::r2c2: p = fftw_plan_dft_r2c_2d(rows, cols, re.ptr, cx.ptr, FFTW_ESTIMATE); break;
            case Kind::c2r2: p = fftw_plan_dft_c2r_2d(rows, cols, cx.ptr, re.ptr, FFTW_ESTIMATE); break;
            case Kind::r2c1: p = fftw_plan_dft_r2c_1d(cols, re.ptr, cx.ptr, FFTW_ESTIMATE); break;
            case Kind::c2r1: p = fftw_plan_dft_c2r_1d(cols, cx.ptr, re.ptr, FFTW_ESTIMATE); break;
        }
        if (!p) throw Error("FFTW planning failed");
        plans_.emplace(key, p);
        return p;
    }

    std::size_t size() {
        std::lock_guard lock(mu_);
        return plans_.size();
    }

private:
    std::mutex mu_;
    std::map<std::tuple<Kind, int, int>, fftw_plan> plans_;
};

PlanStore& store() {
    static PlanStore s;
    return s;
}

std::vector<cplx> forward(Kind kind, int rows, int cols, const std::vector<double>& in) {
    const std::size_t nreal = static_cast<std::size_t>(rows) * cols;
    const std::size_t ncplx = static_cast<std::size_t>(rows) * (cols / 2 + 1);
    if (in.size() != nreal) throw PreconditionError("fft: input size does not match the transform shape");
    fftw_plan p = store().get(kind, rows, cols);
    Buffer<double> re(nreal);
    Buffer<fftw_complex> cx(ncplx);
    std::memcpy(re.ptr, in.data(), sizeof(double) * nreal);
    fftw_execute_dft_r2c(p, re.ptr, cx.ptr);
    std::vector<cplx> out(ncplx);
    std::memcpy(static_cast<void*>(out.data()), cx.ptr, sizeof(fftw_complex) * ncplx);
    return out;
}

std::vector<double> backward(Kind kind, int rows, int cols, const std::vector<cplx>& in) {
    const std::size_t nreal = static_cast<std::size_t>(rows) * cols;
    const std::size_t ncplx = static_cast<std::size_t>(rows) * (cols / 2 + 1);
    if (in.size() != ncplx) throw PreconditionError("fft: spectrum size does not match the transform shape");
    fftw_plan p = store().get(kind, rows, cols);
    Buffer<double> re(nreal);
    Buffer<fftw_complex> cx(ncplx);
    std::memcpy(static_cast<void*>(cx.ptr), in.data(), sizeof(fftw_complex) * ncplx);
    fftw_execute_dft_c2r(p, cx.ptr, re.ptr);  // destroys cx
    std::vector<double> out(re.ptr, re.ptr + nreal);
    const double scale = 1.0 / static_cast<double>(nreal);
    for (double& v : out) v *= scale;
    return out;
}

}  // namespace

std::vector<cplx> r2c_2d(int rows, int cols, const std::vector<double>& in) {
    return forward(Kind::r2c2, rows, cols, in);
}
std::vector<double> c2r_2d(int rows, int cols, const std::vector<cplx>& in) {
    return backward(Kind::c2r2, rows, cols, in);
}
std::vector<cplx> r2c_1d(int n, const std::vector<double>& in) { return forward(Kind::r2c1, 1, n, in); }
std::vector<double> c2r_1d(int n, const std::vector<cplx>& in) { return backward(Kind::c2r1, 1, n, in); }

std::size_t cached_plans() { return store().size(); }

}  // namespace margconv::fft
