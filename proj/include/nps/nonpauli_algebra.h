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

#ifndef NPS_NONPAULI_ALGEBRA_H
#define NPS_NONPAULI_ALGEBRA_H

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "nps/statevector.h"

namespace nps {

/// Rotation parameters of U = exp(i gamma/2 n.sigma), n = (sin theta cos phi, sin theta sin phi, cos theta).
struct Su2Params {
    double gamma = 0;
    double theta = 0;
    double phi = 0;

    /// gamma in [0, 2pi), theta in [0, pi], phi in [0, 2pi). Throws on non-finite input.
    Su2Params canonical() const;
};

/// Operators S^A = U X U^dagger, S^B = U Z U^dagger, S^C = i S^A S^B and their eigenbases.
///
/// Eigenvectors are the columns of U (eig_b_plus = U|0>, eig_b_minus = U|1>,
/// eig_a_plus = U|+>, eig_a_minus = U|->), so S^A maps eig_b_plus to eig_b_minus exactly.
/// The ground state decomposes as |0> = ground_coeff_plus |+>_B + ground_coeff_minus |->_B.
struct OperatorBasis {
    Su2Params params;
    Gate2x2 u;
    Gate2x2 s_a;
    Gate2x2 s_b;
    Gate2x2 s_c;
    std::array<Complex, 2> eig_a_plus;
    std::array<Complex, 2> eig_a_minus;
    std::array<Complex, 2> eig_b_plus;
    std::array<Complex, 2> eig_b_minus;
    Complex ground_coeff_plus;
    Complex ground_coeff_minus;

    bool is_pauli() const;
};

OperatorBasis build_basis(const Su2Params &params);
/// Convenience: the gamma = 0 basis (S^A = X, S^B = Z, S^C = Y).
OperatorBasis pauli_basis();

/// Residuals of the algebraic conditions a basis must satisfy to build commuting stabilizers.
struct AlgebraReport {
    double unitarity = 0;
    double involution_a = 0;
    double involution_b = 0;
    double involution_c = 0;
    double anticommutation = 0;
    double s_c_definition = 0;
    double conjugation = 0;
    double eigenvectors = 0;
    double cross_qubit_commutation = 0;
    double steane_substitution = 0;

    double worst() const;
    bool passed(double tolerance = 1e-10) const {
        return worst() <= tolerance;
    }
};

AlgebraReport check_cross_qubit_commutation(const OperatorBasis &basis);

/// Frobenius-style max-abs residual of [A, B] for two operator strings on `num_qubits` qubits,
/// computed from explicit dense matrices (num_qubits <= 10).
double commutator_residual(const OperatorString &a, const OperatorString &b, std::size_t num_qubits);

/// The six Steane-code generators with qubit 0 substituted X -> S^A, Z -> S^B.
std::vector<OperatorString> substituted_steane_generators(const OperatorBasis &basis);

struct TargetSolution {
    Su2Params params;
    /// Per-qubit coefficients (c, s e^{i phi'}) whose d-th powers are proportional to the target.
    std::array<Complex, 2> chain_coeffs;
    bool ill_conditioned = false;
};

/// Finds the minimal-gamma U whose ground-state coefficients, raised to the power `chain_len`,
/// reproduce the logical amplitudes (alpha, beta) up to normalization and global phase.
TargetSolution solve_params_for_target(Complex alpha, Complex beta, std::size_t chain_len);

}  // namespace nps

#endif
