#include "tfs/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "tfs/error.hpp"

namespace tfs::fft {

namespace {

enum class Kind { c2c_forward, c2c_inverse, r2c, c2r };

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Plans are created once per (kind, size, in-place) and executed through the
// new-array interface, which FFTW documents as thread-safe.
class PlanCache {
 public:
  fftw_plan get(Kind kind, std::size_t n, bool in_place) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(kind, n, in_place);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second.get();

    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = nullptr;
    switch (kind) {
      case Kind::c2c_forward:
      case Kind::c2c_inverse: {
        std::vector<fftw_complex> a(n), b(n);
        fftw_complex* out = in_place ? a.data() : b.data();
        p = fftw_plan_dft_1d(len, a.data(), out,
                             kind == Kind::c2c_forward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        break;
      }
      case Kind::r2c: {
        std::vector<double> a(n);
        std::vector<fftw_complex> b(n / 2 + 1);
        p = fftw_plan_dft_r2c_1d(len, a.data(), b.data(), flags);
        break;
      }
      case Kind::c2r: {
        std::vector<fftw_complex> a(n / 2 + 1);
        std::vector<double> b(n);
        p = fftw_plan_dft_c2r_1d(len, a.data(), b.data(), flags);
        break;
      }
    }
    if (p == nullptr) throw Error(Errc::invalid_parameter, "fft: plan creation failed");
    return plans_.emplace(key, Plan(p)).first->second.get();
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<Kind, std::size_t, bool>, Plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}

void run_c2c(Kind kind, std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != out.size() || in.empty())
    throw Error(Errc::invalid_parameter, "fft: size mismatch");
  const bool in_place = in.data() == out.data();
  fftw_execute_dft(cache().get(kind, in.size(), in_place), as_fftw(in.data()),
                   as_fftw(out.data()));
}

}  // namespace

std::size_t next_fast_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2u, 3u, 5u, 7u})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

void forward(std::span<const cplx> in, std::span<cplx> out) {
  run_c2c(Kind::c2c_forward, in, out);
}

void inverse(std::span<const cplx> in, std::span<cplx> out) {
  run_c2c(Kind::c2c_inverse, in, out);
}

void forward_real(std::span<const double> in, std::span<cplx> out) {
  if (in.empty() || out.size() != in.size() / 2 + 1)
    throw Error(Errc::invalid_parameter, "fft: r2c size mismatch");
  fftw_execute_dft_r2c(cache().get(Kind::r2c, in.size(), false),
                       const_cast<double*>(in.data()), as_fftw(out.data()));
}

void inverse_real(std::span<const cplx> in, std::span<double> out) {
  if (out.empty() || in.size() != out.size() / 2 + 1)
    throw Error(Errc::invalid_parameter, "fft: c2r size mismatch");
  // c2r overwrites its input.
  std::vector<cplx> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(cache().get(Kind::c2r, out.size(), false), as_fftw(scratch.data()),
                       out.data());
}

}  // namespace tfs::fft
