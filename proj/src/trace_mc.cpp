#include "logpot/trace_mc.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "logpot/logkernel.hpp"
#include "logpot/random.hpp"

namespace logpot {

namespace {

constexpr int kMinP = 2;
constexpr int kMaxP = 8;

void check_arguments(int p, std::size_t n, const McOptions& options) {
  if (p < kMinP || p > kMaxP) throw Error("cyclic trace order must be in [2, 8]");
  if (options.batches < 30) throw Error("at least 30 batches are required");
  if (n < options.batches) throw Error("fewer samples than batches");
}

// Runs batch_mean(b, count) for every batch and combines the batch means.
template <typename BatchMean>
TraceEstimate run_batches(int p, std::size_t n, std::uint64_t seed, const McOptions& options,
                          BatchMean&& batch_mean) {
  const std::size_t batches = options.batches;
  std::vector<double> means(batches, 0.0);
  std::vector<std::size_t> counts(batches);
  for (std::size_t b = 0; b < batches; ++b) counts[b] = n / batches + (b < n % batches ? 1 : 0);
  parallel_for(batches, [&](std::size_t b) { means[b] = batch_mean(b, counts[b]); });

  TraceEstimate t;
  t.p = p;
  t.n_samples = n;
  t.seed = seed;
  t.batches = batches;
  double total = 0.0;
  for (std::size_t b = 0; b < batches; ++b) total += means[b] * static_cast<double>(counts[b]);
  t.mean = total / static_cast<double>(n);
  double plain = 0.0;
  for (double m : means) plain += m;
  plain /= static_cast<double>(batches);
  double ss = 0.0;
  for (double m : means) ss += (m - plain) * (m - plain);
  t.std_error = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
  return t;
}

}  // namespace

TraceEstimate cyclic_trace_mc(const Domain& d, int p, std::size_t n, std::uint64_t seed,
                              const McOptions& options) {
  check_arguments(p, n, options);
  if (n < kMinMcSamples) throw Error("at least 10^4 samples are required");
  const double measure = area(d);
  const auto box = bounding_box(d);
  const double scale = std::pow(measure, p);

  return run_batches(p, n, seed, options, [&](std::size_t b, std::size_t count) {
    RandomStream rng = RandomStream::substream(seed, b);
    const auto draw = [&] {
      for (std::size_t attempt = 0; attempt < 100000; ++attempt) {
        const Point2 q{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y)};
        if (contains(d, q)) return q;
      }
      throw Error("rejection sampling failed");
    };
    std::array<Point2, kMaxP> y{};
    double sum = 0.0;
    for (std::size_t s = 0; s < count; ++s) {
      const auto up = static_cast<std::size_t>(p);
      bool coincident = true;
      while (coincident) {  // probability zero, but the kernel is singular there
        for (std::size_t i = 0; i < up; ++i) y[i] = draw();
        coincident = false;
        for (std::size_t i = 0; i < up; ++i) coincident = coincident || y[i] == y[(i + 1) % up];
      }
      double prod = 1.0;
      for (std::size_t i = 0; i < up; ++i) prod *= kernel_profile(distance(y[i], y[(i + 1) % up]));
      sum += prod;
    }
    return scale * sum / static_cast<double>(count);
  });
}

TraceEstimate hs_norm_mc(const Domain& d, std::size_t n, std::uint64_t seed, const McOptions& options) {
  return cyclic_trace_mc(d, 2, n, seed, options);
}

TraceEstimate cyclic_trace_mc_discrete(const OperatorMatrix& a, int p, std::size_t n,
                                       std::uint64_t seed, const McOptions& options) {
  check_arguments(p, n, options);
  const auto cells = static_cast<std::uint64_t>(a.size());
  const double scale = std::pow(static_cast<double>(cells), p);
  return run_batches(p, n, seed, options, [&](std::size_t b, std::size_t count) {
    RandomStream rng = RandomStream::substream(seed, b);
    std::array<Eigen::Index, kMaxP> idx{};
    double sum = 0.0;
    for (std::size_t s = 0; s < count; ++s) {
      for (int i = 0; i < p; ++i) idx[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(rng.below(cells));
      double prod = 1.0;
      for (int i = 0; i < p; ++i)
        prod *= a.entries(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>((i + 1) % p)]);
      sum += prod;
    }
    return scale * sum / static_cast<double>(count);
  });
}

nlohmann::json to_json(const TraceEstimate& t) {
  return nlohmann::json{{"p", t.p}, {"mean", t.mean}, {"stderr", t.std_error}, {"n", t.n_samples}, {"seed", t.seed}};
}

}  // namespace logpot
