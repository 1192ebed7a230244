#pragma once

// Hot loops with an OpenMP version and a serial reference. The two agree
// exactly: parallel versions split work into fixed chunks and combine with
// order-independent operations.

#include <cstdint>
#include <vector>

#include "cst/entropy.hpp"
#include "cst/sampler.hpp"
#include "cst/sofic.hpp"

namespace cst::kernels {

/// Entry L-1 is the root for the spectrum prefix coeff[0, L).
std::vector<FiniteRoot> prefix_roots_serial(const std::vector<long double>& coeff, double tol);
std::vector<FiniteRoot> prefix_roots_omp(const std::vector<long double>& coeff, double tol);

/// Accepted-word counts for lengths 0..n_max.
std::vector<BigCount> transfer_counts_serial(const FactorAutomaton& A, int n_max);
std::vector<BigCount> transfer_counts_omp(const FactorAutomaton& A, int n_max);

inline constexpr long long kSampleChunk = 1024;
BlockCounts block_counts_serial(const WindowSampler& sampler, int n, long long samples, std::uint64_t seed);
BlockCounts block_counts_omp(const WindowSampler& sampler, int n, long long samples, std::uint64_t seed);

}  // namespace cst::kernels
