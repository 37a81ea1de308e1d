#include "qsnet/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "kernels_detail.hpp"

namespace qsnet::kernels {
namespace omp {

void apply_gate(std::span<cplx> data, std::span<const std::size_t> bits, const CMatrix& gate) {
  const std::size_t k = bits.size();
  const std::size_t local = std::size_t{1} << k;
  const auto offsets = spread_offsets(bits);
  std::vector<std::size_t> sorted(bits.begin(), bits.end());
  std::sort(sorted.begin(), sorted.end());
  const auto blocks = static_cast<std::int64_t>(data.size() >> k);

#pragma omp parallel
  {
    std::vector<cplx> in(local), out(local);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < blocks; ++i) {
      const std::uint64_t base = detail::insert_zero_bits(static_cast<std::uint64_t>(i), sorted);
      for (std::size_t l = 0; l < local; ++l) in[l] = data[base + offsets[l]];
      for (std::size_t r = 0; r < local; ++r) {
        cplx acc = 0.0;
        for (std::size_t l = 0; l < local; ++l) acc += gate(r, l) * in[l];
        out[r] = acc;
      }
      for (std::size_t l = 0; l < local; ++l) data[base + offsets[l]] = out[l];
    }
  }
}

std::vector<cplx> phase_diagonal(std::size_t n_bits, std::span<const double> bit_phases) {
  const auto dim = static_cast<std::int64_t>(std::size_t{1} << n_bits);
  std::vector<cplx> diag(static_cast<std::size_t>(dim));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < dim; ++b) {
    double phi = 0.0;
    for (std::size_t p = 0; p < n_bits; ++p) {
      if ((b >> p) & 1) phi += bit_phases[p];
    }
    diag[static_cast<std::size_t>(b)] = std::polar(1.0, phi);
  }
  return diag;
}

void scale_diagonal(std::span<cplx> amps, std::span<const cplx> diag) {
  const auto dim = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for simd schedule(static)
  for (std::int64_t b = 0; b < dim; ++b) amps[b] *= diag[b];
}

void conjugate_diagonal(CMatrix& rho, std::span<const cplx> diag) {
  const auto d = static_cast<Eigen::Index>(diag.size());
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < d; ++c) {
    const cplx dc = std::conj(diag[c]);
    for (Eigen::Index r = 0; r < d; ++r) rho(r, c) *= diag[r] * dc;
  }
}

// Partial sums over a fixed chunk grid, combined in order, so the result does
// not depend on the thread count.
template <typename Term>
cplx chunked_sum(std::int64_t dim, Term term) {
  constexpr std::int64_t kChunks = 64;
  const std::int64_t chunk = (dim + kChunks - 1) / kChunks;
  std::vector<cplx> partial(kChunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < kChunks; ++c) {
    cplx acc = 0.0;
    const std::int64_t end = std::min(dim, (c + 1) * chunk);
    for (std::int64_t i = c * chunk; i < end; ++i) acc += term(static_cast<std::uint64_t>(i));
    partial[static_cast<std::size_t>(c)] = acc;
  }
  cplx total = 0.0;
  for (const cplx& p : partial) total += p;
  return total;
}

cplx pauli_expectation_pure(std::span<const cplx> amps, std::uint64_t x_mask, std::uint64_t z_mask) {
  return chunked_sum(static_cast<std::int64_t>(amps.size()), [&](std::uint64_t b) {
    return std::conj(amps[b ^ x_mask]) * amps[b] * detail::parity_sign(b & z_mask);
  });
}

cplx pauli_expectation_mixed(const CMatrix& rho, std::uint64_t x_mask, std::uint64_t z_mask) {
  return chunked_sum(static_cast<std::int64_t>(rho.rows()), [&](std::uint64_t b) {
    return rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b ^ x_mask)) *
           detail::parity_sign(b & z_mask);
  });
}

CMatrix partial_trace_pure(std::span<const cplx> amps, std::span<const std::uint64_t> kept,
                           std::span<const std::uint64_t> env) {
  const auto k = static_cast<Eigen::Index>(kept.size());
  CMatrix out = CMatrix::Zero(k, k);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      cplx acc = 0.0;
      for (std::uint64_t e : env) acc += amps[kept[a] | e] * std::conj(amps[kept[b] | e]);
      out(a, b) = acc;
    }
  }
  return out;
}

CMatrix partial_trace_mixed(const CMatrix& rho, std::span<const std::uint64_t> kept,
                            std::span<const std::uint64_t> env) {
  const auto k = static_cast<Eigen::Index>(kept.size());
  CMatrix out = CMatrix::Zero(k, k);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index b = 0; b < k; ++b) {
    for (Eigen::Index a = 0; a < k; ++a) {
      cplx acc = 0.0;
      for (std::uint64_t e : env) {
        acc += rho(static_cast<Eigen::Index>(kept[a] | e), static_cast<Eigen::Index>(kept[b] | e));
      }
      out(a, b) = acc;
    }
  }
  return out;
}

}  // namespace omp

namespace {
// Size alone decides, so summation order never depends on the thread count.
// Inside an outer parallel loop the nested region runs on one thread.
bool use_parallel(std::size_t work) { return work >= kParallelDimension; }
}  // namespace

void apply_gate(std::span<cplx> data, std::span<const std::size_t> bits, const CMatrix& gate) {
  use_parallel(data.size()) ? omp::apply_gate(data, bits, gate) : serial::apply_gate(data, bits, gate);
}

std::vector<cplx> phase_diagonal(std::size_t n_bits, std::span<const double> bit_phases) {
  return use_parallel(std::size_t{1} << n_bits) ? omp::phase_diagonal(n_bits, bit_phases)
                                                : serial::phase_diagonal(n_bits, bit_phases);
}

void scale_diagonal(std::span<cplx> amps, std::span<const cplx> diag) {
  use_parallel(amps.size()) ? omp::scale_diagonal(amps, diag) : serial::scale_diagonal(amps, diag);
}

void conjugate_diagonal(CMatrix& rho, std::span<const cplx> diag) {
  use_parallel(static_cast<std::size_t>(rho.size())) ? omp::conjugate_diagonal(rho, diag)
                                                     : serial::conjugate_diagonal(rho, diag);
}

cplx pauli_expectation_pure(std::span<const cplx> amps, std::uint64_t x_mask, std::uint64_t z_mask) {
  return use_parallel(amps.size()) ? omp::pauli_expectation_pure(amps, x_mask, z_mask)
                                   : serial::pauli_expectation_pure(amps, x_mask, z_mask);
}

cplx pauli_expectation_mixed(const CMatrix& rho, std::uint64_t x_mask, std::uint64_t z_mask) {
  return use_parallel(static_cast<std::size_t>(rho.rows()))
             ? omp::pauli_expectation_mixed(rho, x_mask, z_mask)
             : serial::pauli_expectation_mixed(rho, x_mask, z_mask);
}

CMatrix partial_trace_pure(std::span<const cplx> amps, std::span<const std::uint64_t> kept,
                           std::span<const std::uint64_t> env) {
  return use_parallel(kept.size() * kept.size() * env.size())
             ? omp::partial_trace_pure(amps, kept, env)
             : serial::partial_trace_pure(amps, kept, env);
}

CMatrix partial_trace_mixed(const CMatrix& rho, std::span<const std::uint64_t> kept,
                            std::span<const std::uint64_t> env) {
  return use_parallel(kept.size() * kept.size() * env.size())
             ? omp::partial_trace_mixed(rho, kept, env)
             : serial::partial_trace_mixed(rho, kept, env);
}

}  // namespace qsnet::kernels
