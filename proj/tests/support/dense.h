// Copyright 2026 The nps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NPS_TESTS_DENSE_H
#define NPS_TESTS_DENSE_H

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

#include "nps/statevector.h"

namespace nps::test {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using cd = std::complex<double>;

Mat to_dense(const Gate2x2 &g);

/// Kronecker product; the left factor is the more significant one.
Mat kron(const Mat &a, const Mat &b);

/// Operator on n qubits where qubit q is bit q of the basis index.
Mat dense_op(const OperatorString &ops, std::size_t n);

/// |control=1><1| (x) g on target, identity elsewhere.
Mat dense_controlled(const Gate2x2 &g, std::size_t control, std::size_t target, std::size_t n);

Vec to_vec(const StateVector &s);

/// Max-abs entry of a - b.
double max_abs(const Mat &a);

/// Random unit vector from a fixed seed.
Vec random_state(std::size_t n, unsigned seed);

/// Pauli matrices as Eigen 2x2.
Mat pauli(char which);

}  // namespace nps::test

#endif
