#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace vbank {

/// Per-fund ten-year conventional return multiples (1.0 = break-even).
class ReturnPortfolio {
public:
    ReturnPortfolio() = default;
    /// Throws DomainError when empty or when any multiple is negative or non-finite.
    ReturnPortfolio(std::vector<double> multiples, std::string label);

    std::span<const double> multiples() const { return multiples_; }
    std::size_t size() const { return multiples_.size(); }
    bool empty() const { return multiples_.empty(); }
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    friend bool operator==(const ReturnPortfolio&, const ReturnPortfolio&) = default;

private:
    std::vector<double> multiples_;
    std::string label_;
};

struct PortfolioStats {
    double mean = 0.0;
    double stddev = 0.0;  // population (divisor n)
};

PortfolioStats portfolio_stats(const ReturnPortfolio& p);

/// Mean after resetting every fund strictly above `threshold` to break-even.
double clamped_mean(const ReturnPortfolio& p, double threshold);

/// Published shape of the 99-fund venture dataset. Losses are percentages.
struct KauffmanConstraints {
    int n = 99;
    double mean = 1.31;
    double stddev = 1.116;
    double sigma_clamp_loss = 2.72;
    double breakeven_clamp_loss = 17.45;

    void validate() const;
};

/// Preferred bucket proportions for synthesis. The nearest feasible split wins.
struct SynthesisShape {
    double loser_fraction = 0.25;
    double large_winner_fraction = 0.15;
    /// Keeps bucket members this far from the 1 + sigma boundary.
    double boundary_margin = 0.02;
};

struct SynthesisResiduals {
    double mean = 0.0;
    double stddev = 0.0;
    double sigma_clamp_mean = 0.0;
    double breakeven_clamp_mean = 0.0;

    double max_abs() const;
};

struct SynthesisResult {
    ReturnPortfolio portfolio;
    std::uint64_t seed = 0;
    int losers = 0;
    int moderate_winners = 0;
    int large_winners = 0;
    SynthesisResiduals residuals;
};

inline constexpr double kSynthesisMeanTolerance = 0.005;
inline constexpr double kSynthesisStddevTolerance = 0.005;
inline constexpr double kSynthesisClampTolerance = 0.0005;

/// Builds a portfolio meeting the constraints: three buckets (losers below
/// break-even, moderate winners up to 1 + sigma, large winners beyond) whose
/// masses are fixed by the two clamp losses, with seeded within-bucket shapes
/// scaled to hit the standard deviation. Throws CalibrationError when no
/// bucket split can satisfy the constraints.
SynthesisResult synthesize_kauffman(const KauffmanConstraints& c, std::uint64_t seed,
                                    const SynthesisShape& shape = {});

/// Sorts descending and averages adjacent disjoint pairs; an odd leftover is kept.
ReturnPortfolio compress_pairs(const ReturnPortfolio& p);

/// Additive shift to `target` mean with flooring at zero; clipped mass is
/// taken uniformly from the funds still above zero.
ReturnPortfolio shift_to_mean(const ReturnPortfolio& p, double target);

/// One-column CSV (`multiple`) plus `<path>.meta` key=value sidecar.
void write_portfolio_csv(const std::filesystem::path& path, const ReturnPortfolio& p,
                         const std::map<std::string, std::string>& metadata = {});
ReturnPortfolio read_portfolio_csv(const std::filesystem::path& path);
std::filesystem::path metadata_path(const std::filesystem::path& csv_path);

/// Metadata entries describing a synthesis run.
std::map<std::string, std::string> synthesis_metadata(const SynthesisResult& r,
                                                      const KauffmanConstraints& c);

}  // namespace vbank
