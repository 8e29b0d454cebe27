#pragma once

#include <complex>

namespace wavelab::detail {

// Unnormalized real-to-complex transforms on a cube of n^dim points in
// row-major layout. Plans are cached and shared; calls are thread-safe.
template <typename Scalar>
struct FftTraits;

template <>
struct FftTraits<double> {
    static void forward(int dim, int n, const double* in, std::complex<double>* out);
    // Overwrites `in`.
    static void inverse(int dim, int n, std::complex<double>* in, double* out);
};

template <>
struct FftTraits<float> {
    static void forward(int dim, int n, const float* in, std::complex<float>* out);
    static void inverse(int dim, int n, std::complex<float>* in, float* out);
};

}  // namespace wavelab::detail
