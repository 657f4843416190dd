/*
 * Copyright 2026 The propreg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <vector>

#include "propreg/grid.hpp"

namespace propreg::fft {

/// Unnormalized in-place DFT over all axes of g, exponent sign -1.
void forward(const Grid& g, cplx* data);

/// Unnormalized in-place DFT over all axes of g, exponent sign +1.
void backward(const Grid& g, cplx* data);

/// Type-II DCT, y_k = 2 sum_j x_j cos(pi (j + 1/2) k / n).
std::vector<double> dct2(const std::vector<double>& x);

} // namespace propreg::fft
