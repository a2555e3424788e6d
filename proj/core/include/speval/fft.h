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

#ifndef SPEVAL_FFT_H_
#define SPEVAL_FFT_H_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace speval {

// Real-input forward FFT of a fixed size. Inputs shorter than the FFT size are
// zero-padded. Returns the nfft/2 + 1 non-negative frequency bins.
class RealFft {
 public:
  explicit RealFft(std::size_t nfft);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;

  std::size_t size() const { return nfft_; }
  void Forward(std::span<const double> input,
               std::vector<std::complex<double>>& half_spectrum);

 private:
  struct Impl;
  std::size_t nfft_;
  std::unique_ptr<Impl> impl_;
  std::vector<double> padded_;
};

// Full linear convolution (length a.size() + b.size() - 1) through a
// zero-padded FFT.
std::vector<double> FftConvolve(std::span<const double> a,
                                std::span<const double> b);

}  // namespace speval

#endif  // SPEVAL_FFT_H_
