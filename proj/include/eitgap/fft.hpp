#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace eitgap {

/// Unnormalized 1-D complex DFT of a fixed size backed by FFTW. Forward is
/// sum x_n e^{-2 pi i mn/N}; `inverse` divides by N. Plans are created under
/// a global lock, execution is reentrant.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }

  void forward(std::span<std::complex<double>> data) const;
  void inverse(std::span<std::complex<double>> data) const;

 private:
  struct Plans;
  std::size_t n_ = 0;
  std::unique_ptr<Plans> plans_;
};

}  // namespace eitgap
