#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pitmanlab/rng.hpp"
#include "pitmanlab/sample.hpp"

namespace pitmanlab {

// Number of worker threads, from PITMANLAB_WORKERS (default 1). Worker count
// never changes results: replicate r always uses substream(r) and block sums
// are combined in a fixed order.
unsigned mc_worker_count();

// Paired Monte Carlo over a fixed number of estimators that share each
// replicate's draws. Results are accumulated into jackknife blocks so that
// standard errors of arbitrary functionals of the estimator variances (an
// inequality slack, say) can be computed afterwards.
class PairedMcResult {
  public:
    std::int64_t reps() const { return reps_; }
    int blocks() const { return n_blocks_; }

    double mean(std::size_t est) const;
    double variance(std::size_t est) const;
    std::vector<double> variances() const;
    double mean_stderr(std::size_t est) const;

    // Jackknife-over-blocks estimate and standard error of fn(variances).
    double jackknife(const std::function<double(const std::vector<double>&)>& fn,
                     double* stderr_out) const;

    VarianceEstimate variance_estimate(std::size_t est) const;

  private:
    friend PairedMcResult run_paired_mc(std::size_t, std::int64_t, const SeededStream&,
                                        const std::function<void(SeededStream&, double*)>&);
    std::size_t n_est_ = 0;
    std::int64_t reps_ = 0;
    int n_blocks_ = 0;
    std::vector<double> blk_count_;                // per block
    std::vector<std::vector<double>> blk_sum_;     // [block][est]
    std::vector<std::vector<double>> blk_sum2_;    // [block][est]
    std::vector<double> total_sum_, total_sum2_;   // pairwise-reduced over blocks

    std::vector<double> loo_variances(int skip_block) const;
};

// `replicate` fills out[0..n_est) with the estimator values for one draw.
PairedMcResult run_paired_mc(std::size_t n_est, std::int64_t reps, const SeededStream& base,
                             const std::function<void(SeededStream&, double*)>& replicate);

} // namespace pitmanlab
