#pragma once

#include <cstddef>
#include <cstdint>

#include <json.hpp>

#include "logpot/discretize.hpp"
#include "logpot/geometry.hpp"

namespace logpot {

/// Monte-Carlo estimate of sum_j mu_j^{-p}, i.e. of the p-fold cyclic kernel
/// integral over the domain.
struct TraceEstimate {
  int p = 2;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::size_t batches = 0;
};

struct McOptions {
  /// Batch-means error bars; at least 30.
  std::size_t batches = 40;
};

inline constexpr std::size_t kMinMcSamples = 10'000;

/// |d|^p times the mean over n draws of prod_i k(Y_i, Y_{i+1 mod p}), Y_i
/// i.i.d. uniform on d. Batch b draws from substream (seed, b), so results are
/// independent of the worker count.
TraceEstimate cyclic_trace_mc(const Domain& d, int p, std::size_t n, std::uint64_t seed,
                              const McOptions& options = {});

/// p = 2: the squared Hilbert-Schmidt norm.
TraceEstimate hs_norm_mc(const Domain& d, std::size_t n, std::uint64_t seed,
                         const McOptions& options = {});

/// Same estimator with the cell centres of a discretized operator as a
/// discrete uniform measure: N^p times the mean of prod_i A(c_i, c_{i+1}). Its
/// expectation is exactly tr(A^p).
TraceEstimate cyclic_trace_mc_discrete(const OperatorMatrix& a, int p, std::size_t n,
                                       std::uint64_t seed, const McOptions& options = {});

nlohmann::json to_json(const TraceEstimate& t);

}  // namespace logpot
