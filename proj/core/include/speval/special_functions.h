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

#ifndef SPEVAL_SPECIAL_FUNCTIONS_H_
#define SPEVAL_SPECIAL_FUNCTIONS_H_

namespace speval {

// Regularized incomplete beta I_x(a, b), evaluated with a modified-Lentz
// continued fraction (relative tolerance 1e-15).
double RegularizedIncompleteBeta(double a, double b, double x);

// Regularized lower / upper incomplete gamma P(a, x), Q(a, x).
double RegularizedGammaP(double a, double x);
double RegularizedGammaQ(double a, double x);

// Survival functions. Degrees of freedom may be non-integer.
double FDistributionSf(double f, double df1, double df2);
double ChiSquareSf(double x, double df);
double StudentTTwoSidedP(double t, double df);

}  // namespace speval

#endif  // SPEVAL_SPECIAL_FUNCTIONS_H_
