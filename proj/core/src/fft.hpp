#pragma once

#include <complex>

namespace wmlab::detail {

// Thin thread-safe wrappers over FFTW for the square N x N arrays used by
// the Weyl transforms. Planning is serialized behind a mutex and cached per
// (N, kind); execution goes through the new-array interface so one plan can
// serve any caller's buffers. FFTW_ESTIMATE keeps results bitwise stable.
//
// Arrays are column-major N x N: element (r, c) sits at r + c*N.
// Transforms are unnormalized; sign -1 is forward.

void fft2(std::complex<double>* data, int n, int sign);

// 1D transforms of length n along the first index of every column.
void fft_columns(std::complex<double>* data, int n, int sign);

// 1D transform of a single contiguous vector.
void fft1(std::complex<double>* data, int n, int sign);

}  // namespace wmlab::detail
