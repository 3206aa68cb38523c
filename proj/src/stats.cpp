#include "pace/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "pace/chain_model.hpp"
#include "pace/util.hpp"

namespace pace::stats {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_paired(std::span<const double> x, std::span<const double> y, size_t min_n,
                    const char* who) {
    if (x.size() != y.size())
        throw std::invalid_argument(std::string(who) + ": length mismatch");
    if (x.size() < min_n)
        throw std::invalid_argument(std::string(who) + ": need at least " +
                                    std::to_string(min_n) + " pairs");
}

bool is_constant(std::span<const double> v) {
    for (double x : v) {
        if (x != v[0]) return false;
    }
    return true;
}

double pearson_raw(std::span<const double> x, std::span<const double> y) {
    double mx = util::mean(x), my = util::mean(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0)
        throw std::invalid_argument("correlation undefined for constant input");
    return sxy / std::sqrt(sxx * syy);
}

// Exact two-sided permutation p: fraction of y-rank permutations whose
// |rho| reaches the observed |rho|.
double exact_spearman_p(const std::vector<double>& xr, const std::vector<double>& yr,
                        double rho_obs) {
    const size_t n = xr.size();
    double mx = util::mean(xr);
    double sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xr[i] - mx) * (xr[i] - mx);
        syy += (yr[i] - mx) * (yr[i] - mx);  // ranks of both share the mean (n+1)/2
    }
    const double denom = std::sqrt(sxx * syy);
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    uint64_t total = 0, hits = 0;
    const double threshold = std::abs(rho_obs) - 1e-12;
    do {
        double sxy = 0;
        for (size_t i = 0; i < n; ++i) sxy += (xr[i] - mx) * (yr[perm[i]] - mx);
        if (std::abs(sxy / denom) >= threshold) ++hits;
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

RankedPairing make_ranked_pairing(std::vector<std::string> subjects, std::vector<double> x,
                                  std::vector<double> y) {
    if (subjects.size() != x.size() || x.size() != y.size())
        throw std::invalid_argument("make_ranked_pairing: length mismatch");
    RankedPairing p;
    p.subjects = std::move(subjects);
    p.x = std::move(x);
    p.y = std::move(y);
    auto xr = average_ranks(p.x);
    auto yr = average_ranks(p.y);
    const double n1 = static_cast<double>(p.x.size()) + 1.0;
    p.x_rank_desc.resize(xr.size());
    p.y_rank_desc.resize(yr.size());
    for (size_t i = 0; i < xr.size(); ++i) {
        p.x_rank_desc[i] = n1 - xr[i];
        p.y_rank_desc[i] = n1 - yr[i];
    }
    return p;
}

CorrelationReport spearman(std::span<const double> x, std::span<const double> y) {
    require_paired(x, y, 3, "spearman");
    if (is_constant(x) || is_constant(y))
        throw std::invalid_argument("spearman: constant input, rho undefined");

    auto xr = average_ranks(x);
    auto yr = average_ranks(y);
    CorrelationReport report;
    report.n = static_cast<int>(x.size());
    report.rho = pearson_raw(xr, yr);

    if (x.size() <= 9) {
        report.method = "exact";
        report.p_value = exact_spearman_p(xr, yr, report.rho);
    } else {
        report.method = "t-approximation";
        double r = std::clamp(report.rho, -1.0, 1.0);
        if (std::abs(r) >= 1.0) {
            report.p_value = 0.0;
        } else {
            double df = static_cast<double>(report.n - 2);
            double t = r * std::sqrt(df / (1.0 - r * r));
            report.p_value = student_t_two_sided_p(t, df);
        }
    }
    return report;
}

namespace {

// Mean over non-NaN cells of the selected seed columns; NaN when none.
double subject_mean(const std::vector<double>& row, std::span<const size_t> columns) {
    double sum = 0;
    size_t count = 0;
    for (size_t c : columns) {
        double v = row[c];
        if (!std::isnan(v)) {
            sum += v;
            ++count;
        }
    }
    return count ? sum / static_cast<double>(count) : kNaN;
}

void require_matrix(const std::vector<std::vector<double>>& m, std::span<const double> lb) {
    if (m.size() != lb.size())
        throw std::invalid_argument("per-seed matrix rows must match leaderboard length");
    if (m.empty()) throw std::invalid_argument("empty per-seed matrix");
    for (const auto& row : m) {
        if (row.size() != m.front().size())
            throw std::invalid_argument("ragged per-seed matrix");
    }
}

std::optional<CorrelationReport> replicate_spearman(
    const std::vector<std::vector<double>>& per_seed, std::span<const double> leaderboard,
    std::span<const size_t> columns) {
    std::vector<double> scores(per_seed.size());
    for (size_t s = 0; s < per_seed.size(); ++s) {
        scores[s] = subject_mean(per_seed[s], columns);
        if (std::isnan(scores[s])) return std::nullopt;
    }
    std::vector<double> lb(leaderboard.begin(), leaderboard.end());
    try {
        return spearman(scores, lb);
    } catch (const std::invalid_argument&) {
        return std::nullopt;  // degenerate resample (constant scores)
    }
}

}  // namespace

BootstrapReport bootstrap_correlation(const std::vector<std::vector<double>>& per_seed_scores,
                                      std::span<const double> leaderboard, int replicates,
                                      uint64_t seed) {
    require_matrix(per_seed_scores, leaderboard);
    if (replicates < 100) throw std::invalid_argument("bootstrap needs >= 100 replicates");
    const size_t n_seeds = per_seed_scores.front().size();
    if (n_seeds < 2) throw std::invalid_argument("bootstrap needs >= 2 seeds");

    BootstrapReport report;
    report.seed = seed;
    std::vector<double> rhos;
    rhos.reserve(static_cast<size_t>(replicates));
    size_t significant = 0;

    std::vector<size_t> columns(n_seeds);
    for (int r = 0; r < replicates; ++r) {
        // Per-replicate stream derived from the master seed, so the result
        // is identical no matter how replicates are scheduled.
        util::Rng rng(util::Rng::derive_seed(seed, static_cast<uint64_t>(r)));
        for (auto& c : columns) c = static_cast<size_t>(rng.next_below(n_seeds));
        auto rep = replicate_spearman(per_seed_scores, leaderboard, columns);
        if (!rep) {
            ++report.skipped_degenerate;
            continue;
        }
        rhos.push_back(rep->rho);
        if (rep->p_value < 0.05) ++significant;
    }

    report.replicates = static_cast<int>(rhos.size());
    if (rhos.empty()) return report;
    report.mean_rho = util::mean(rhos);
    report.se = util::sample_stddev(rhos);
    report.ci_low = util::percentile(rhos, 0.025);
    report.ci_high = util::percentile(rhos, 0.975);
    report.significance_ratio =
        static_cast<double>(significant) / static_cast<double>(rhos.size());
    return report;
}

SubsampleReport subsample_correlation(const std::vector<std::vector<double>>& per_seed_scores,
                                      std::span<const double> leaderboard, int seeds_per_draw,
                                      int iterations, uint64_t seed) {
    require_matrix(per_seed_scores, leaderboard);
    const size_t n_seeds = per_seed_scores.front().size();
    if (seeds_per_draw < 1 || static_cast<size_t>(seeds_per_draw) > n_seeds)
        throw std::invalid_argument("seeds_per_draw out of range");
    if (iterations < 1) throw std::invalid_argument("iterations must be positive");

    SubsampleReport report;
    report.seeds_per_draw = seeds_per_draw;
    report.seed = seed;
    std::vector<double> rhos;
    rhos.reserve(static_cast<size_t>(iterations));
    for (int r = 0; r < iterations; ++r) {
        util::Rng rng(util::Rng::derive_seed(seed, static_cast<uint64_t>(r)));
        auto columns =
            util::sample_without_replacement(n_seeds, static_cast<size_t>(seeds_per_draw), rng);
        auto rep = replicate_spearman(per_seed_scores, leaderboard, columns);
        if (!rep) {
            ++report.skipped_degenerate;
            continue;
        }
        rhos.push_back(rep->rho);
    }
    report.iterations = static_cast<int>(rhos.size());
    if (rhos.empty()) return report;
    report.mean_rho = util::mean(rhos);
    report.std_rho = util::sample_stddev(rhos);
    return report;
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("welch_t: each sample needs >= 2 values");
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double ma = util::mean(a), mb = util::mean(b);
    double va = 0, vb = 0;
    for (double v : a) va += (v - ma) * (v - ma);
    for (double v : b) vb += (v - mb) * (v - mb);
    va /= na - 1;
    vb /= nb - 1;
    double sa = va / na, sb = vb / nb;
    if (sa + sb == 0.0) {
        // zero variance in both samples
        if (ma == mb) return {0.0, na + nb - 2, 1.0};
        throw std::invalid_argument("welch_t: zero variance in both samples");
    }
    WelchResult r;
    r.t = (ma - mb) / std::sqrt(sa + sb);
    r.df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1) + sb * sb / (nb - 1));
    r.p_value = student_t_two_sided_p(r.t, r.df);
    return r;
}

namespace {

OlsFit ols_core(std::span<const double> x, std::span<const double> y, double df,
                int groups) {
    double mx = util::mean(x), my = util::mean(y);
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("ols: constant regressor");

    OlsFit fit;
    fit.n = static_cast<int>(x.size());
    fit.groups = groups;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double ssr = 0, sst = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double resid = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += resid * resid;
        sst += (y[i] - my) * (y[i] - my);
    }
    fit.r_squared = (sst == 0) ? 1.0 : 1.0 - ssr / sst;

    if (df > 0 && ssr > 0) {
        double se = std::sqrt(ssr / df / sxx);
        fit.slope_p = student_t_two_sided_p(fit.slope / se, df);
    } else {
        fit.slope_p = (ssr <= 0) ? 0.0 : 1.0;
    }
    return fit;
}

}  // namespace

OlsFit ols(std::span<const double> x, std::span<const double> y) {
    require_paired(x, y, 3, "ols");
    return ols_core(x, y, static_cast<double>(x.size()) - 2.0, 0);
}

OlsFit ols_within(std::span<const double> x, std::span<const double> y,
                  std::span<const int> group) {
    require_paired(x, y, 3, "ols_within");
    if (group.size() != x.size())
        throw std::invalid_argument("ols_within: group length mismatch");

    struct Accum {
        double sx = 0, sy = 0;
        size_t n = 0;
    };
    std::unordered_map<int, Accum> acc;
    for (size_t i = 0; i < x.size(); ++i) {
        auto& a = acc[group[i]];
        a.sx += x[i];
        a.sy += y[i];
        ++a.n;
    }
    std::vector<double> xd(x.size()), yd(y.size());
    double mx = util::mean(x), my = util::mean(y);
    for (size_t i = 0; i < x.size(); ++i) {
        const auto& a = acc.at(group[i]);
        // Demean within group, then re-center on the grand means so the
        // reported intercept is on the original scale.
        xd[i] = x[i] - a.sx / static_cast<double>(a.n) + mx;
        yd[i] = y[i] - a.sy / static_cast<double>(a.n) + my;
    }
    double df = static_cast<double>(x.size()) - static_cast<double>(acc.size()) - 1.0;
    if (df < 1) throw std::invalid_argument("ols_within: too many groups for sample size");
    return ols_core(xd, yd, df, static_cast<int>(acc.size()));
}

double pearson(std::span<const double> x, std::span<const double> y) {
    require_paired(x, y, 2, "pearson");
    return pearson_raw(x, y);
}

namespace {

// Counts discordant pairs via bottom-up merge sort over y after sorting
// by (x, y); joint ties contribute nothing.
uint64_t merge_count_swaps(std::vector<double>& y) {
    const size_t n = y.size();
    std::vector<double> buf(n);
    uint64_t swaps = 0;
    for (size_t width = 1; width < n; width *= 2) {
        for (size_t lo = 0; lo + width < n; lo += 2 * width) {
            size_t mid = lo + width;
            size_t hi = std::min(lo + 2 * width, n);
            size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (y[j] < y[i]) {
                    swaps += mid - i;
                    buf[k++] = y[j++];
                } else {
                    buf[k++] = y[i++];
                }
            }
            while (i < mid) buf[k++] = y[i++];
            while (j < hi) buf[k++] = y[j++];
            std::copy(buf.begin() + static_cast<ptrdiff_t>(lo),
                      buf.begin() + static_cast<ptrdiff_t>(hi),
                      y.begin() + static_cast<ptrdiff_t>(lo));
        }
    }
    return swaps;
}

uint64_t tie_pairs(std::span<const double> sorted_keys) {
    uint64_t total = 0;
    size_t i = 0;
    while (i < sorted_keys.size()) {
        size_t j = i;
        while (j + 1 < sorted_keys.size() && sorted_keys[j + 1] == sorted_keys[i]) ++j;
        uint64_t t = j - i + 1;
        total += t * (t - 1) / 2;
        i = j + 1;
    }
    return total;
}

}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
    require_paired(x, y, 2, "kendall_tau");
    const size_t n = x.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    // tie counts: n1 over x, n2 over y, n3 over joint (x, y)
    uint64_t n1 = 0, n3 = 0;
    {
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
            uint64_t t = j - i + 1;
            n1 += t * (t - 1) / 2;
            size_t a = i;
            while (a <= j) {
                size_t b = a;
                while (b + 1 <= j && y[order[b + 1]] == y[order[a]]) ++b;
                uint64_t u = b - a + 1;
                n3 += u * (u - 1) / 2;
                a = b + 1;
            }
            i = j + 1;
        }
    }
    std::vector<double> ys(n);
    for (size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
    std::vector<double> ys_sorted = ys;
    std::sort(ys_sorted.begin(), ys_sorted.end());
    uint64_t n2 = tie_pairs(ys_sorted);

    uint64_t swaps = merge_count_swaps(ys);
    const double n0 = static_cast<double>(n) * (n - 1) / 2.0;
    double con_minus_dis = n0 - static_cast<double>(n1) - static_cast<double>(n2) +
                           static_cast<double>(n3) - 2.0 * static_cast<double>(swaps);
    double denom = std::sqrt((n0 - static_cast<double>(n1)) * (n0 - static_cast<double>(n2)));
    if (denom == 0) throw std::invalid_argument("kendall_tau: constant input");
    return con_minus_dis / denom;
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
    require_paired(predicted, actual, 1, "rmse");
    double ss = 0;
    for (size_t i = 0; i < predicted.size(); ++i) {
        double d = predicted[i] - actual[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(predicted.size()));
}

double ttr(std::span<const std::string> tokens) {
    if (tokens.empty()) throw std::invalid_argument("ttr: empty token list");
    std::unordered_set<std::string> types;
    size_t total = 0;
    for (const auto& t : tokens) {
        auto canon = chain::canonicalize_word(t);
        types.insert(canon.ok() ? *canon.token : util::to_lower(util::trim(t)));
        ++total;
    }
    return static_cast<double>(types.size()) / static_cast<double>(total);
}

// --- Student's t machinery ---------------------------------------------------

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                   b * std::log1p(-x);
    double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (df <= 0) throw std::invalid_argument("student_t_two_sided_p: df must be positive");
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

}  // namespace pace::stats
