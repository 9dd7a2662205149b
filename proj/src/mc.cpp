#include "pitmanlab/mc.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "pitmanlab/errors.hpp"

namespace pitmanlab {

unsigned mc_worker_count() {
    const char* env = std::getenv("PITMANLAB_WORKERS");
    if (!env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1) return 1;
    return static_cast<unsigned>(std::min(v, 64l));
}

namespace {

// Fixed-tree pairwise reduction; independent of how blocks were produced.
double pairwise_total(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_total(v, lo, mid) + pairwise_total(v, mid, hi);
}

double pairwise_total(const std::vector<double>& v) {
    return v.empty() ? 0.0 : pairwise_total(v, 0, v.size());
}

double var_from_sums(double count, double s1, double s2) {
    if (count < 2) return 0.0;
    const double mean = s1 / count;
    return std::max(0.0, (s2 - count * mean * mean) / (count - 1.0));
}

} // namespace

double PairedMcResult::mean(std::size_t est) const {
    return total_sum_[est] / static_cast<double>(reps_);
}

double PairedMcResult::variance(std::size_t est) const {
    return var_from_sums(static_cast<double>(reps_), total_sum_[est], total_sum2_[est]);
}

std::vector<double> PairedMcResult::variances() const {
    std::vector<double> out(n_est_);
    for (std::size_t j = 0; j < n_est_; ++j) out[j] = variance(j);
    return out;
}

std::vector<double> PairedMcResult::loo_variances(int skip_block) const {
    std::vector<double> out(n_est_);
    const double cnt = static_cast<double>(reps_) - blk_count_[static_cast<std::size_t>(skip_block)];
    for (std::size_t j = 0; j < n_est_; ++j) {
        const double s1 = total_sum_[j] - blk_sum_[static_cast<std::size_t>(skip_block)][j];
        const double s2 = total_sum2_[j] - blk_sum2_[static_cast<std::size_t>(skip_block)][j];
        out[j] = var_from_sums(cnt, s1, s2);
    }
    return out;
}

double PairedMcResult::jackknife(const std::function<double(const std::vector<double>&)>& fn,
                                 double* stderr_out) const {
    const double full = fn(variances());
    if (stderr_out) {
        std::vector<double> theta(static_cast<std::size_t>(n_blocks_));
        double mean_theta = 0.0;
        for (int b = 0; b < n_blocks_; ++b) {
            theta[static_cast<std::size_t>(b)] = fn(loo_variances(b));
            mean_theta += theta[static_cast<std::size_t>(b)];
        }
        mean_theta /= n_blocks_;
        double ss = 0.0;
        for (double t : theta) ss += (t - mean_theta) * (t - mean_theta);
        const double bf = static_cast<double>(n_blocks_);
        *stderr_out = std::sqrt(ss * (bf - 1.0) / bf);
    }
    return full;
}

double PairedMcResult::mean_stderr(std::size_t est) const {
    std::vector<double> theta(static_cast<std::size_t>(n_blocks_));
    double mt = 0.0;
    for (int b = 0; b < n_blocks_; ++b) {
        const double cnt = static_cast<double>(reps_) - blk_count_[static_cast<std::size_t>(b)];
        theta[static_cast<std::size_t>(b)] =
            (total_sum_[est] - blk_sum_[static_cast<std::size_t>(b)][est]) / cnt;
        mt += theta[static_cast<std::size_t>(b)];
    }
    mt /= n_blocks_;
    double ss = 0.0;
    for (double t : theta) ss += (t - mt) * (t - mt);
    const double bf = static_cast<double>(n_blocks_);
    return std::sqrt(ss * (bf - 1.0) / bf);
}

VarianceEstimate PairedMcResult::variance_estimate(std::size_t est) const {
    VarianceEstimate ve;
    double se = 0.0;
    ve.value = jackknife([est](const std::vector<double>& v) { return v[est]; }, &se);
    ve.stderr_ = se;
    ve.ci_low = ve.value - 1.96 * se;
    ve.ci_high = ve.value + 1.96 * se;
    ve.method = Method::monte_carlo;
    ve.replications = reps_;
    return ve;
}

PairedMcResult run_paired_mc(std::size_t n_est, std::int64_t reps, const SeededStream& base,
                             const std::function<void(SeededStream&, double*)>& replicate) {
    if (reps < 100) throw ShapeError("monte carlo requires reps >= 100");
    PairedMcResult r;
    r.n_est_ = n_est;
    r.reps_ = reps;
    r.n_blocks_ = static_cast<int>(std::min<std::int64_t>(100, reps));
    const std::size_t nb = static_cast<std::size_t>(r.n_blocks_);
    r.blk_count_.assign(nb, 0.0);
    r.blk_sum_.assign(nb, std::vector<double>(n_est, 0.0));
    r.blk_sum2_.assign(nb, std::vector<double>(n_est, 0.0));

    auto run_block = [&](std::size_t b) {
        const std::int64_t lo = reps * static_cast<std::int64_t>(b) / r.n_blocks_;
        const std::int64_t hi = reps * (static_cast<std::int64_t>(b) + 1) / r.n_blocks_;
        std::vector<double> vals(n_est);
        auto& s1 = r.blk_sum_[b];
        auto& s2 = r.blk_sum2_[b];
        for (std::int64_t rep = lo; rep < hi; ++rep) {
            SeededStream stream = base.substream(static_cast<std::uint64_t>(rep));
            replicate(stream, vals.data());
            for (std::size_t j = 0; j < n_est; ++j) {
                s1[j] += vals[j];
                s2[j] += vals[j] * vals[j];
            }
        }
        r.blk_count_[b] = static_cast<double>(hi - lo);
    };

    const unsigned workers = std::min<unsigned>(mc_worker_count(), static_cast<unsigned>(nb));
    if (workers <= 1) {
        for (std::size_t b = 0; b < nb; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t b = w; b < nb; b += workers) run_block(b);
            });
        for (auto& t : pool) t.join();
    }

    r.total_sum_.resize(n_est);
    r.total_sum2_.resize(n_est);
    std::vector<double> col(nb);
    for (std::size_t j = 0; j < n_est; ++j) {
        for (std::size_t b = 0; b < nb; ++b) col[b] = r.blk_sum_[b][j];
        r.total_sum_[j] = pairwise_total(col);
        for (std::size_t b = 0; b < nb; ++b) col[b] = r.blk_sum2_[b][j];
        r.total_sum2_[j] = pairwise_total(col);
    }
    return r;
}

} // namespace pitmanlab
