#include <wavelab/fft.hpp>

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace wavelab::detail {

namespace {

std::mutex planner_mutex;

std::vector<int> shape(int dim, int n) { return std::vector<int>(static_cast<std::size_t>(dim), n); }

std::size_t real_size(int dim, int n)
{
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n);
    return s;
}

std::size_t complex_size(int dim, int n) { return real_size(dim, n) / n * (n / 2 + 1); }

constexpr unsigned plan_flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

template <typename Plan, typename Destroy>
class PlanCache {
public:
    explicit PlanCache(Destroy destroy) : destroy_(destroy) {}
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) destroy_(plan);
    }

    template <typename Make>
    Plan get(int dim, int n, bool forward, Make make)
    {
        std::lock_guard lock(planner_mutex);
        const auto key = std::make_tuple(dim, n, forward);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        Plan plan = make();
        plans_.emplace(key, plan);
        return plan;
    }

private:
    Destroy destroy_;
    std::map<std::tuple<int, int, bool>, Plan> plans_;
};

PlanCache<fftw_plan, void (*)(fftw_plan)>& double_plans()
{
    static PlanCache<fftw_plan, void (*)(fftw_plan)> cache(&fftw_destroy_plan);
    return cache;
}

PlanCache<fftwf_plan, void (*)(fftwf_plan)>& float_plans()
{
    static PlanCache<fftwf_plan, void (*)(fftwf_plan)> cache(&fftwf_destroy_plan);
    return cache;
}

}  // namespace

void FftTraits<double>::forward(int dim, int n, const double* in, std::complex<double>* out)
{
    fftw_plan plan = double_plans().get(dim, n, true, [&] {
        auto dims = shape(dim, n);
        double* a = fftw_alloc_real(real_size(dim, n));
        fftw_complex* b = fftw_alloc_complex(complex_size(dim, n));
        fftw_plan p = fftw_plan_dft_r2c(dim, dims.data(), a, b, plan_flags);
        fftw_free(a);
        fftw_free(b);
        return p;
    });
    fftw_execute_dft_r2c(plan, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void FftTraits<double>::inverse(int dim, int n, std::complex<double>* in, double* out)
{
    fftw_plan plan = double_plans().get(dim, n, false, [&] {
        auto dims = shape(dim, n);
        double* a = fftw_alloc_real(real_size(dim, n));
        fftw_complex* b = fftw_alloc_complex(complex_size(dim, n));
        fftw_plan p = fftw_plan_dft_c2r(dim, dims.data(), b, a, plan_flags);
        fftw_free(a);
        fftw_free(b);
        return p;
    });
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in), out);
}

void FftTraits<float>::forward(int dim, int n, const float* in, std::complex<float>* out)
{
    fftwf_plan plan = float_plans().get(dim, n, true, [&] {
        auto dims = shape(dim, n);
        float* a = fftwf_alloc_real(real_size(dim, n));
        fftwf_complex* b = fftwf_alloc_complex(complex_size(dim, n));
        fftwf_plan p = fftwf_plan_dft_r2c(dim, dims.data(), a, b, plan_flags);
        fftwf_free(a);
        fftwf_free(b);
        return p;
    });
    fftwf_execute_dft_r2c(plan, const_cast<float*>(in), reinterpret_cast<fftwf_complex*>(out));
}

void FftTraits<float>::inverse(int dim, int n, std::complex<float>* in, float* out)
{
    fftwf_plan plan = float_plans().get(dim, n, false, [&] {
        auto dims = shape(dim, n);
        float* a = fftwf_alloc_real(real_size(dim, n));
        fftwf_complex* b = fftwf_alloc_complex(complex_size(dim, n));
        fftwf_plan p = fftwf_plan_dft_c2r(dim, dims.data(), b, a, plan_flags);
        fftwf_free(a);
        fftwf_free(b);
        return p;
    });
    fftwf_execute_dft_c2r(plan, reinterpret_cast<fftwf_complex*>(in), out);
}

}  // namespace wavelab::detail
