// Copyright 2026 The speval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "speval/fft.h"

#include <unsupported/Eigen/FFT>

#include <algorithm>

#include "speval/error.h"

namespace speval {

struct RealFft::Impl {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> full;
};

RealFft::RealFft(std::size_t nfft) : nfft_(nfft), impl_(std::make_unique<Impl>()) {
  if (nfft == 0) throw Error(ErrorCode::kInvalidArgument, "FFT size must be > 0");
  impl_->fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  padded_.assign(nfft, 0.0);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::Forward(std::span<const double> input,
                      std::vector<std::complex<double>>& half_spectrum) {
  const std::size_t n = std::min(input.size(), nfft_);
  std::copy_n(input.begin(), n, padded_.begin());
  std::fill(padded_.begin() + static_cast<std::ptrdiff_t>(n), padded_.end(), 0.0);
  impl_->fft.fwd(half_spectrum, padded_);
  half_spectrum.resize(nfft_ / 2 + 1);
}

std::vector<double> FftConvolve(std::span<const double> a,
                                std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  // Small kernels are cheaper (and exact to more digits) in the time domain.
  if (std::min(a.size(), b.size()) <= 32) {
    std::vector<double> out(out_len, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }
  std::size_t nfft = 1;
  while (nfft < out_len) nfft <<= 1;

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> pa(nfft, 0.0);
  std::vector<double> pb(nfft, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<double>> fa;
  std::vector<std::complex<double>> fb;
  fft.fwd(fa, pa);
  fft.fwd(fb, pb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  std::vector<double> out;
  fft.inv(out, fa, nfft);
  out.resize(out_len);
  return out;
}

}  // namespace speval
