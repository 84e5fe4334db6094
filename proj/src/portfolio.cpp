#include "vbank/portfolio.hpp"

#include "vbank/config.hpp"
#include "vbank/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

namespace vbank {

ReturnPortfolio::ReturnPortfolio(std::vector<double> multiples, std::string label)
    : multiples_(std::move(multiples)), label_(std::move(label)) {
    if (multiples_.empty()) throw DomainError("portfolio must hold at least one fund");
    for (double m : multiples_)
        if (!(m >= 0.0) || !std::isfinite(m))
            throw DomainError("fund multiple must be finite and non-negative");
}

PortfolioStats portfolio_stats(const ReturnPortfolio& p) {
    if (p.empty()) throw DomainError("statistics of an empty portfolio");
    const auto xs = p.multiples();
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / n)};
}

double clamped_mean(const ReturnPortfolio& p, double threshold) {
    if (p.empty()) throw DomainError("clamp of an empty portfolio");
    double sum = 0.0;
    for (double x : p.multiples()) sum += x > threshold ? 1.0 : x;
    return sum / static_cast<double>(p.size());
}

void KauffmanConstraints::validate() const {
    if (n < 3) throw DomainError("fund count must be at least 3");
    if (!(mean >= 0.0)) throw DomainError("target mean must be non-negative");
    if (!(stddev >= 0.0)) throw DomainError("target stddev must be non-negative");
    if (!(sigma_clamp_loss >= 0.0 && sigma_clamp_loss <= breakeven_clamp_loss))
        throw DomainError("clamp losses must satisfy 0 <= sigma loss <= break-even loss");
    if (breakeven_clamp_loss > 100.0) throw DomainError("break-even clamp loss above 100%");
}

double SynthesisResiduals::max_abs() const {
    return std::max({std::abs(mean), std::abs(stddev), std::abs(sigma_clamp_mean),
                     std::abs(breakeven_clamp_mean)});
}

namespace {

SynthesisResiduals residuals_of(const ReturnPortfolio& p, const KauffmanConstraints& c) {
    const auto s = portfolio_stats(p);
    SynthesisResiduals r;
    r.mean = s.mean - c.mean;
    r.stddev = s.stddev - c.stddev;
    r.sigma_clamp_mean = clamped_mean(p, 1.0 + s.stddev) - (1.0 - c.sigma_clamp_loss / 100.0);
    r.breakeven_clamp_mean = clamped_mean(p, 1.0) - (1.0 - c.breakeven_clamp_loss / 100.0);
    return r;
}

bool within_tolerance(const SynthesisResiduals& r) {
    return std::abs(r.mean) <= kSynthesisMeanTolerance &&
           std::abs(r.stddev) <= kSynthesisStddevTolerance &&
           std::abs(r.sigma_clamp_mean) <= kSynthesisClampTolerance &&
           std::abs(r.breakeven_clamp_mean) <= kSynthesisClampTolerance;
}

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations so output is portable.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Zero-mean shape with min == -1. Skewed shapes come from exponential draws.
std::vector<double> bucket_shape(std::mt19937_64& rng, int count, bool skewed) {
    std::vector<double> z(static_cast<std::size_t>(count));
    for (auto& v : z) v = skewed ? -std::log1p(-unit(rng)) : unit(rng);
    if (count < 2) return std::vector<double>(z.size(), 0.0);
    const double mean = std::accumulate(z.begin(), z.end(), 0.0) / count;
    for (auto& v : z) v -= mean;
    const double lo = *std::min_element(z.begin(), z.end());
    if (lo >= 0.0) return std::vector<double>(z.size(), 0.0);
    for (auto& v : z) v /= -lo;
    return z;
}

struct Bucket {
    int count = 0;
    double center = 0.0;   // mean distance from break-even (positive)
    double sign = 1.0;     // +1 winners, -1 losers
    double max_spread = 0.0;
    std::vector<double> shape;

    // Value of member i at spread a: 1 + sign * center * (1 + a z_i).
    double value(std::size_t i, double a) const { return 1.0 + sign * center * (1.0 + a * shape[i]); }
    double mean_value() const { return 1.0 + sign * center; }
    double shape_sumsq() const {
        double s = 0.0;
        for (double z : shape) s += z * z;
        return s;
    }
};

// Largest spread `a` with lo <= center * (1 + a z) <= hi for every z, and
// 1 + a z > 0 so members stay strictly on their side of break-even.
double max_spread(const std::vector<double>& z, double center, double lo, double hi) {
    double a = 1.0 - 1e-9;
    for (double v : z) {
        if (v > 0.0) a = std::min(a, (hi / center - 1.0) / v);
        if (v < 0.0) a = std::min(a, (1.0 - lo / center) / -v);
    }
    return std::max(a, 0.0);
}

struct Attempt {
    bool feasible = false;
    double variance_gap = std::numeric_limits<double>::infinity();
    std::vector<double> values;
};

Attempt try_split(const KauffmanConstraints& c, const SynthesisShape& shape, std::uint64_t seed,
                  int losers, int large) {
    const int n = c.n;
    const int moderate = n - losers - large;
    const double deficit = n * c.breakeven_clamp_loss / 100.0;
    const double moderate_excess = n * (c.breakeven_clamp_loss - c.sigma_clamp_loss) / 100.0;
    const double large_excess = n * (c.mean - 1.0) + deficit - moderate_excess;
    const double margin = shape.boundary_margin;
    const double tau = c.stddev;  // distance of the sigma-clamp boundary from break-even

    Attempt out;
    std::mt19937_64 rng(seed);
    std::vector<Bucket> buckets;

    if (losers > 0) {
        Bucket b{losers, deficit / losers, -1.0, 0.0, bucket_shape(rng, losers, false)};
        if (b.center > 1.0) return out;
        b.max_spread = max_spread(b.shape, b.center, 0.0, 1.0);
        buckets.push_back(std::move(b));
    }
    if (moderate > 0) {
        Bucket b{moderate, moderate_excess / moderate, 1.0, 0.0, bucket_shape(rng, moderate, true)};
        if (b.center > tau - margin) return out;
        b.max_spread = max_spread(b.shape, b.center, 0.0, tau - margin);
        buckets.push_back(std::move(b));
    }
    if (large > 0) {
        Bucket b{large, large_excess / large, 1.0, 0.0, bucket_shape(rng, large, true)};
        if (b.center < tau + margin) return out;
        b.max_spread = max_spread(b.shape, b.center, tau + margin,
                                  std::numeric_limits<double>::infinity());
        buckets.push_back(std::move(b));
    }

    // Total variance is between-bucket plus s^2 times the within-bucket
    // variance at maximum spread, so the scale s is solved in closed form.
    double between = 0.0, within_max = 0.0;
    for (const auto& b : buckets) {
        between += b.count * std::pow(b.mean_value() - c.mean, 2);
        within_max += std::pow(b.center * b.max_spread, 2) * b.shape_sumsq();
    }
    const double target = n * c.stddev * c.stddev;
    if (target < between) {
        out.variance_gap = between - target;
        return out;
    }
    if (target > between + within_max) {
        out.variance_gap = target - between - within_max;
        return out;
    }
    const double s = within_max > 0.0 ? std::sqrt((target - between) / within_max) : 0.0;

    for (const auto& b : buckets)
        for (std::size_t i = 0; i < b.shape.size(); ++i)
            out.values.push_back(std::max(0.0, b.value(i, s * b.max_spread)));
    std::sort(out.values.begin(), out.values.end(), std::greater<>());
    out.feasible = true;
    out.variance_gap = 0.0;
    return out;
}

}  // namespace

SynthesisResult synthesize_kauffman(const KauffmanConstraints& c, std::uint64_t seed,
                                    const SynthesisShape& shape) {
    c.validate();
    SynthesisResult result;
    result.seed = seed;

    if (c.stddev == 0.0) {
        ReturnPortfolio p(std::vector<double>(static_cast<std::size_t>(c.n), c.mean), "kauffman");
        result.residuals = residuals_of(p, c);
        if (!within_tolerance(result.residuals))
            throw CalibrationError("constant portfolio cannot meet clamp losses; residual " +
                                   format_double(result.residuals.max_abs()));
        if (c.mean < 1.0) result.losers = c.n;
        if (c.mean > 1.0) result.large_winners = c.n;
        if (c.mean == 1.0) result.moderate_winners = c.n;
        result.portfolio = std::move(p);
        return result;
    }

    const int n = c.n;
    const bool need_losers = c.breakeven_clamp_loss > 0.0;
    const bool need_moderate = c.breakeven_clamp_loss > c.sigma_clamp_loss;
    const double large_excess = n * (c.mean - 1.0) + n * c.sigma_clamp_loss / 100.0;
    const bool need_large = large_excess > 1e-12;
    if (large_excess < -1e-12)
        throw CalibrationError("mean below the sigma-clamped mean; no split exists");

    const double want_losers = shape.loser_fraction * n;
    const double want_large = shape.large_winner_fraction * n;
    std::vector<std::tuple<double, int, int>> splits;
    for (int l = need_losers ? 1 : 0; l <= (need_losers ? n : 0); ++l)
        for (int g = need_large ? 1 : 0; g <= (need_large ? n : 0); ++g) {
            const int m = n - l - g;
            if (m < 0 || (need_moderate ? m == 0 : m != 0)) continue;
            splits.emplace_back(std::abs(l - want_losers) + std::abs(g - want_large), l, g);
        }
    std::sort(splits.begin(), splits.end());

    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& [dist, l, g] : splits) {
        auto attempt = try_split(c, shape, seed, l, g);
        best_gap = std::min(best_gap, attempt.variance_gap);
        if (!attempt.feasible) continue;
        ReturnPortfolio p(std::move(attempt.values), "kauffman");
        auto r = residuals_of(p, c);
        if (!within_tolerance(r)) continue;
        result.portfolio = std::move(p);
        result.residuals = r;
        result.losers = l;
        result.large_winners = g;
        result.moderate_winners = n - l - g;
        return result;
    }
    throw CalibrationError("no bucket split meets the constraints after " +
                           std::to_string(splits.size()) + " attempts; smallest variance gap " +
                           format_double(best_gap / n));
}

ReturnPortfolio compress_pairs(const ReturnPortfolio& p) {
    if (p.size() < 2) throw DomainError("pair compression needs at least two funds");
    std::vector<double> sorted(p.multiples().begin(), p.multiples().end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const std::size_t n = sorted.size();
    // Odd count: the unpaired element sits at the even index nearest the
    // median (upper on ties), so pairs stay adjacent on both sides of it.
    const std::size_t leftover = n % 2 ? (((n - 1) / 2 + 1) & ~std::size_t{1}) : n;
    std::vector<double> out;
    out.reserve((n + 1) / 2);
    for (std::size_t i = 0; i < n;) {
        if (i == leftover) {
            out.push_back(sorted[i]);
            i += 1;
        } else {
            out.push_back(0.5 * (sorted[i] + sorted[i + 1]));
            i += 2;
        }
    }
    return ReturnPortfolio(std::move(out), p.label());
}

ReturnPortfolio shift_to_mean(const ReturnPortfolio& p, double target) {
    if (!(target >= 0.0) || !std::isfinite(target)) throw DomainError("target mean must be >= 0");
    if (p.empty()) throw DomainError("shift of an empty portfolio");
    std::vector<double> xs(p.multiples().begin(), p.multiples().end());
    const double n = static_cast<double>(xs.size());
    const double delta = target - portfolio_stats(p).mean;
    if (delta == 0.0) return p;
    if (target == 0.0) throw DomainError("target mean 0 would clip every fund");
    for (auto& x : xs) x += delta;

    double deficit = 0.0;
    for (auto& x : xs)
        if (x < 0.0) {
            deficit -= x;
            x = 0.0;
        }
    constexpr double kTolerance = 1e-12;
    for (int iter = 0; deficit > kTolerance * n; ++iter) {
        std::size_t positive = 0;
        for (double x : xs) positive += x > 0.0;
        if (positive == 0 || iter > 10000)
            throw DomainError("target mean " + format_double(target) + " is infeasible");
        const double share = deficit / static_cast<double>(positive);
        deficit = 0.0;
        for (auto& x : xs) {
            if (x <= 0.0) continue;
            x -= share;
            if (x < 0.0) {
                deficit -= x;
                x = 0.0;
            }
        }
    }
    ReturnPortfolio out(std::move(xs), p.label());
    if (std::abs(portfolio_stats(out).mean - target) > 1e-9)
        throw DomainError("target mean " + format_double(target) + " is infeasible");
    return out;
}

std::filesystem::path metadata_path(const std::filesystem::path& csv_path) {
    auto meta = csv_path;
    meta += ".meta";
    return meta;
}

void write_portfolio_csv(const std::filesystem::path& path, const ReturnPortfolio& p,
                         const std::map<std::string, std::string>& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "multiple\n";
    for (double x : p.multiples()) out << format_double(x) << '\n';
    if (!out) throw IoError("write failed for " + path.string());

    KeyValueFile meta(metadata);
    meta.set("label", p.label());
    meta.set("funds", std::to_string(p.size()));
    meta.set("stddev_convention", "population");
    meta.save(metadata_path(path));
}

ReturnPortfolio read_portfolio_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || (line != "multiple" && line != "multiple\r"))
        throw LoadError("portfolio header must be 'multiple'", 1);
    std::vector<double> xs;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        try {
            xs.push_back(parse_double(line, "multiple"));
        } catch (const ConfigError& e) {
            throw LoadError(e.what(), line_no);
        }
    }
    std::string label = path.stem().string();
    if (std::filesystem::exists(metadata_path(path)))
        label = KeyValueFile::load(metadata_path(path)).get_or("label", label);
    if (xs.empty()) throw EmptySeriesError("portfolio file " + path.string() + " has no funds");
    return ReturnPortfolio(std::move(xs), label);
}

std::map<std::string, std::string> synthesis_metadata(const SynthesisResult& r,
                                                      const KauffmanConstraints& c) {
    return {
        {"seed", std::to_string(r.seed)},
        {"target_mean", format_double(c.mean)},
        {"target_stddev", format_double(c.stddev)},
        {"target_sigma_clamp_loss_pct", format_double(c.sigma_clamp_loss)},
        {"target_breakeven_clamp_loss_pct", format_double(c.breakeven_clamp_loss)},
        {"bucket_losers", std::to_string(r.losers)},
        {"bucket_moderate_winners", std::to_string(r.moderate_winners)},
        {"bucket_large_winners", std::to_string(r.large_winners)},
        {"residual_mean", format_double(r.residuals.mean)},
        {"residual_stddev", format_double(r.residuals.stddev)},
        {"residual_sigma_clamp_mean", format_double(r.residuals.sigma_clamp_mean)},
        {"residual_breakeven_clamp_mean", format_double(r.residuals.breakeven_clamp_mean)},
    };
}

}  // namespace vbank
