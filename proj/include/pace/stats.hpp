#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pace::stats {

// Average ranks (1-based, ascending: smallest value -> rank 1); ties get
// the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

struct CorrelationReport {
    double rho = 0.0;
    double p_value = 1.0;
    int n = 0;
    std::string method;  // "exact" | "t-approximation"
};

// Paired rankings against one leaderboard. Both sides ranked descending
// (higher score = rank 1) for reporting; rho is orientation-free.
struct RankedPairing {
    std::vector<std::string> subjects;
    std::vector<double> x;  // PACE scores
    std::vector<double> y;  // leaderboard scores
    std::vector<double> x_rank_desc;
    std::vector<double> y_rank_desc;
};

RankedPairing make_ranked_pairing(std::vector<std::string> subjects, std::vector<double> x,
                                  std::vector<double> y);

// Spearman rho with average-rank ties. Two-sided p: exact permutation
// enumeration for n <= 9, else t = rho*sqrt((n-2)/(1-rho^2)) against
// Student's t with n-2 df. Throws on constant input or n < 3.
CorrelationReport spearman(std::span<const double> x, std::span<const double> y);

struct BootstrapReport {
    int replicates = 0;
    int skipped_degenerate = 0;
    double mean_rho = 0.0;
    double se = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double significance_ratio = 0.0;  // fraction of replicates with p < 0.05
    uint64_t seed = 0;
};

// per_seed_scores: subject x seed matrix of per-seed scores; NaN marks a
// missing cell and is skipped when averaging. Each replicate resamples
// seed columns with replacement and recomputes every subject's mean score.
BootstrapReport bootstrap_correlation(const std::vector<std::vector<double>>& per_seed_scores,
                                      std::span<const double> leaderboard, int replicates,
                                      uint64_t seed);

struct SubsampleReport {
    int seeds_per_draw = 0;
    int iterations = 0;
    int skipped_degenerate = 0;
    double mean_rho = 0.0;
    double std_rho = 0.0;
    uint64_t seed = 0;
};

// Seed subsets drawn without replacement per iteration.
SubsampleReport subsample_correlation(const std::vector<std::vector<double>>& per_seed_scores,
                                      std::span<const double> leaderboard, int seeds_per_draw,
                                      int iterations, uint64_t seed);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_value = 1.0;
};

// Unequal-variance t with Welch-Satterthwaite df; sign follows a - b.
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

struct OlsFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
    double slope_p = 1.0;
    int n = 0;
    int groups = 0;  // nonzero when per-group intercepts were absorbed
};

OlsFit ols(std::span<const double> x, std::span<const double> y);

// Per-group intercept absorption by within-group demeaning; slope equals
// the dummy-variable fit (Frisch-Waugh). df = n - groups - 1.
OlsFit ols_within(std::span<const double> x, std::span<const double> y,
                  std::span<const int> group);

double pearson(std::span<const double> x, std::span<const double> y);
// Tau-b (tie-corrected), O(n log n) merge-sort formulation.
double kendall_tau(std::span<const double> x, std::span<const double> y);
double rmse(std::span<const double> predicted, std::span<const double> actual);

// Distinct canonical tokens / total tokens, in (0, 1].
double ttr(std::span<const std::string> tokens);

// Two-sided tail probability of Student's t.
double student_t_two_sided_p(double t, double df);
// Regularized incomplete beta I_x(a, b); continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace pace::stats
