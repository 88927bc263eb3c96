#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace wmlab::detail {
namespace {

enum class Kind { Two, Columns, One };

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan get_plan(Kind kind, int n, int sign) {
  static std::map<std::tuple<Kind, int, int>, fftw_plan> cache;
  std::lock_guard lock(plan_mutex());
  auto key = std::make_tuple(kind, n, sign);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const std::size_t len = kind == Kind::One ? static_cast<std::size_t>(n)
                                           : static_cast<std::size_t>(n) * n;
  std::vector<fftw_complex> scratch(len);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = nullptr;
  switch (kind) {
    case Kind::Two:
      plan = fftw_plan_dft_2d(n, n, scratch.data(), scratch.data(), sign, flags);
      break;
    case Kind::Columns: {
      int dims[1] = {n};
      plan = fftw_plan_many_dft(1, dims, n, scratch.data(), nullptr, 1, n,
                                scratch.data(), nullptr, 1, n, sign, flags);
      break;
    }
    case Kind::One:
      plan = fftw_plan_dft_1d(n, scratch.data(), scratch.data(), sign, flags);
      break;
  }
  cache.emplace(key, plan);
  return plan;
}

fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

void fft2(std::complex<double>* data, int n, int sign) {
  fftw_execute_dft(get_plan(Kind::Two, n, sign), as_fftw(data), as_fftw(data));
}

void fft_columns(std::complex<double>* data, int n, int sign) {
  fftw_execute_dft(get_plan(Kind::Columns, n, sign), as_fftw(data), as_fftw(data));
}

void fft1(std::complex<double>* data, int n, int sign) {
  fftw_execute_dft(get_plan(Kind::One, n, sign), as_fftw(data), as_fftw(data));
}

}  // namespace wmlab::detail
