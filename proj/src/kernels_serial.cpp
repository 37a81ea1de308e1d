#include "qsnet/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "kernels_detail.hpp"

namespace qsnet::kernels {

std::vector<std::uint64_t> spread_offsets(std::span<const std::size_t> bits) {
  const std::size_t k = bits.size();
  std::vector<std::uint64_t> offsets(std::size_t{1} << k, 0);
  for (std::size_t l = 0; l < offsets.size(); ++l) {
    std::uint64_t off = 0;
    for (std::size_t t = 0; t < k; ++t) {
      if ((l >> (k - 1 - t)) & 1U) off |= std::uint64_t{1} << bits[t];
    }
    offsets[l] = off;
  }
  return offsets;
}

namespace serial {

void apply_gate(std::span<cplx> data, std::span<const std::size_t> bits, const CMatrix& gate) {
  const std::size_t k = bits.size();
  const std::size_t local = std::size_t{1} << k;
  const auto offsets = spread_offsets(bits);
  std::vector<std::size_t> sorted(bits.begin(), bits.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<cplx> in(local), out(local);
  const std::size_t blocks = data.size() >> k;
  for (std::size_t i = 0; i < blocks; ++i) {
    const std::uint64_t base = detail::insert_zero_bits(i, sorted);
    for (std::size_t l = 0; l < local; ++l) in[l] = data[base + offsets[l]];
    for (std::size_t r = 0; r < local; ++r) {
      cplx acc = 0.0;
      for (std::size_t l = 0; l < local; ++l) acc += gate(r, l) * in[l];
      out[r] = acc;
    }
    for (std::size_t l = 0; l < local; ++l) data[base + offsets[l]] = out[l];
  }
}

std::vector<cplx> phase_diagonal(std::size_t n_bits, std::span<const double> bit_phases) {
  const std::size_t dim = std::size_t{1} << n_bits;
  std::vector<cplx> diag(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    double phi = 0.0;
    for (std::size_t p = 0; p < n_bits; ++p) {
      if ((b >> p) & 1U) phi += bit_phases[p];
    }
    diag[b] = std::polar(1.0, phi);
  }
  return diag;
}

void scale_diagonal(std::span<cplx> amps, std::span<const cplx> diag) {
  for (std::size_t b = 0; b < amps.size(); ++b) amps[b] *= diag[b];
}

void conjugate_diagonal(CMatrix& rho, std::span<const cplx> diag) {
  const auto d = static_cast<Eigen::Index>(diag.size());
  for (Eigen::Index c = 0; c < d; ++c) {
    const cplx dc = std::conj(diag[c]);
    for (Eigen::Index r = 0; r < d; ++r) rho(r, c) *= diag[r] * dc;
  }
}

cplx pauli_expectation_pure(std::span<const cplx> amps, std::uint64_t x_mask, std::uint64_t z_mask) {
  cplx acc = 0.0;
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    acc += std::conj(amps[b ^ x_mask]) * amps[b] * detail::parity_sign(b & z_mask);
  }
  return acc;
}

cplx pauli_expectation_mixed(const CMatrix& rho, std::uint64_t x_mask, std::uint64_t z_mask) {
  cplx acc = 0.0;
  const auto d = static_cast<std::uint64_t>(rho.rows());
  for (std::uint64_t b = 0; b < d; ++b) {
    acc += rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b ^ x_mask)) *
           detail::parity_sign(b & z_mask);
  }
  return acc;
}

CMatrix partial_trace_pure(std::span<const cplx> amps, std::span<const std::uint64_t> kept,
                           std::span<const std::uint64_t> env) {
  const auto k = static_cast<Eigen::Index>(kept.size());
  CMatrix out = CMatrix::Zero(k, k);
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

}  // namespace serial
}  // namespace qsnet::kernels
