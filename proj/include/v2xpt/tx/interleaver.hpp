#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

namespace v2xpt {

/// Destination index j for every source index k of one N_CBPS block.
/// First permutation spreads adjacent bits over non-adjacent subcarriers,
/// the second alternates them between more and less significant
/// constellation bits.
inline std::vector<int> interleaver_permutation(int n_cbps, int n_bpsc) {
  if (n_cbps <= 0 || n_cbps % 16 != 0 || n_bpsc <= 0) {
    throw std::invalid_argument("interleaver_permutation: invalid block parameters");
  }
  const int s = std::max(n_bpsc / 2, 1);
  std::vector<int> perm(static_cast<std::size_t>(n_cbps));
  for (int k = 0; k < n_cbps; ++k) {
    const int i = (n_cbps / 16) * (k % 16) + k / 16;
    const int j = s * (i / s) + (i + n_cbps - (16 * i) / n_cbps) % s;
    perm[static_cast<std::size_t>(k)] = j;
  }
  return perm;
}

template <typename T>
std::vector<T> interleave(std::span<const T> block, std::span<const int> perm) {
  if (block.size() != perm.size()) {
    throw std::invalid_argument("interleave: block length must equal N_CBPS");
  }
  std::vector<T> out(block.size());
  for (std::size_t k = 0; k < block.size(); ++k) {
    out[static_cast<std::size_t>(perm[k])] = block[k];
  }
  return out;
}

template <typename T>
std::vector<T> deinterleave(std::span<const T> block, std::span<const int> perm) {
  if (block.size() != perm.size()) {
    throw std::invalid_argument("deinterleave: block length must equal N_CBPS");
  }
  std::vector<T> out(block.size());
  for (std::size_t k = 0; k < block.size(); ++k) {
    out[k] = block[static_cast<std::size_t>(perm[k])];
  }
  return out;
}

}  // namespace v2xpt
