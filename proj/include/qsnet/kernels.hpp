#pragma once

// Inner loops over state vectors and density matrices.
//
// `serial` is the reference implementation; `omp` is the OpenMP version used
// by qcore for registers at or above kParallelDimension. Both namespaces
// expose identical signatures and must agree to rounding.
//
// Density matrices are addressed as flat column-major vectors, so entry
// (r, c) of a d x d matrix sits at r + d * c: row bits occupy the low half of
// the flat index and column bits the high half.

#include <cstdint>
#include <span>
#include <vector>

#include "qsnet/qcore.hpp"

namespace qsnet::kernels {

inline constexpr std::size_t kParallelDimension = std::size_t{1} << 10;

/// offsets[l] places the bits of l onto `bits` (bits[0] receives the MSB of l).
std::vector<std::uint64_t> spread_offsets(std::span<const std::size_t> bits);

namespace serial {

/// Applies a 2^k x 2^k gate to the k bit positions `bits` of a flat register.
void apply_gate(std::span<cplx> data, std::span<const std::size_t> bits, const CMatrix& gate);

/// diag[b] = exp(i * sum of bit_phases[p] over set bits p of b).
std::vector<cplx> phase_diagonal(std::size_t n_bits, std::span<const double> bit_phases);

/// amps[b] *= diag[b].
void scale_diagonal(std::span<cplx> amps, std::span<const cplx> diag);

/// rho(r, c) *= diag[r] * conj(diag[c]).
void conjugate_diagonal(CMatrix& rho, std::span<const cplx> diag);

/// sum_b conj(psi[b ^ x]) (-1)^{|b & z|} psi[b]  (Pauli coefficient excluded).
cplx pauli_expectation_pure(std::span<const cplx> amps, std::uint64_t x_mask, std::uint64_t z_mask);

/// sum_b (-1)^{|b & z|} rho(b, b ^ x)  (Pauli coefficient excluded).
cplx pauli_expectation_mixed(const CMatrix& rho, std::uint64_t x_mask, std::uint64_t z_mask);

/// R(a, b) = sum_e psi[kept[a] | env[e]] conj(psi[kept[b] | env[e]]).
CMatrix partial_trace_pure(std::span<const cplx> amps, std::span<const std::uint64_t> kept,
                           std::span<const std::uint64_t> env);

/// R(a, b) = sum_e rho(kept[a] | env[e], kept[b] | env[e]).
CMatrix partial_trace_mixed(const CMatrix& rho, std::span<const std::uint64_t> kept,
                            std::span<const std::uint64_t> env);

}  // namespace serial

namespace omp {

void apply_gate(std::span<cplx> data, std::span<const std::size_t> bits, const CMatrix& gate);
std::vector<cplx> phase_diagonal(std::size_t n_bits, std::span<const double> bit_phases);
void scale_diagonal(std::span<cplx> amps, std::span<const cplx> diag);
void conjugate_diagonal(CMatrix& rho, std::span<const cplx> diag);
cplx pauli_expectation_pure(std::span<const cplx> amps, std::uint64_t x_mask, std::uint64_t z_mask);
cplx pauli_expectation_mixed(const CMatrix& rho, std::uint64_t x_mask, std::uint64_t z_mask);
CMatrix partial_trace_pure(std::span<const cplx> amps, std::span<const std::uint64_t> kept,
                           std::span<const std::uint64_t> env);
CMatrix partial_trace_mixed(const CMatrix& rho, std::span<const std::uint64_t> kept,
                            std::span<const std::uint64_t> env);

}  // namespace omp

// Size-based dispatch used by the library.
void apply_gate(std::span<cplx> data, std::span<const std::size_t> bits, const CMatrix& gate);
std::vector<cplx> phase_diagonal(std::size_t n_bits, std::span<const double> bit_phases);
void scale_diagonal(std::span<cplx> amps, std::span<const cplx> diag);
void conjugate_diagonal(CMatrix& rho, std::span<const cplx> diag);
cplx pauli_expectation_pure(std::span<const cplx> amps, std::uint64_t x_mask, std::uint64_t z_mask);
cplx pauli_expectation_mixed(const CMatrix& rho, std::uint64_t x_mask, std::uint64_t z_mask);
CMatrix partial_trace_pure(std::span<const cplx> amps, std::span<const std::uint64_t> kept,
                           std::span<const std::uint64_t> env);
CMatrix partial_trace_mixed(const CMatrix& rho, std::span<const std::uint64_t> kept,
                            std::span<const std::uint64_t> env);

}  // namespace qsnet::kernels
