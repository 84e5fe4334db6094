#pragma once

#include "vbank/bank_engine.hpp"
#include "vbank/portfolio.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vbank {

struct SweepRow {
    double libor_pct = 0.0;      // grid value
    double bank_rate_pct = 0.0;  // funds rate the bank actually pays
    std::string portfolio_label;
    double moc = 0.0;
    double bank_multiple = 0.0;
    double underwriter_return = 0.0;
    bool survived = false;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct Provenance {
    std::string config_digest;
    std::uint64_t seed = 0;
    std::string timestamp;
};

/// Rows ordered by (portfolio_label, moc, libor_pct) with unique keys.
struct SweepTable {
    std::vector<SweepRow> rows;
    Provenance provenance;
};

/// Evaluates every (config, rate) pair; grid values are LIBOR percentages and
/// the bank pays the funds rate. Pairs are distributed across OpenMP threads.
/// Throws naming the first failing pair.
SweepTable run_sweep(std::span<const ScenarioConfig> configs, std::span<const double> libor_grid_pct);

/// Single-threaded reference for run_sweep; output must match it exactly.
SweepTable run_sweep_serial(std::span<const ScenarioConfig> configs,
                            std::span<const double> libor_grid_pct);

/// `lo:hi:step`, inclusive of both ends; the last step is clamped to hi.
std::vector<double> parse_rate_grid(std::string_view text);
/// Historical LIBOR span 0.53% to 7.50% in 0.25 steps.
std::vector<double> default_rate_grid();

/// `portfolio,moc,libor_pct,bank_rate_pct,bank_multiple,underwriter_return,survived`.
/// Numbers use shortest round-trip text, so reading back is value-identical.
void write_sweep_csv(std::ostream& out, const SweepTable& t);
SweepTable read_sweep_csv(std::istream& in);
/// key=value provenance block written next to the CSV, never inside it.
void write_provenance(std::ostream& out, const Provenance& p);

/// Synthesizes the 99-fund portfolio, optionally pair-compresses it, and
/// shifts a copy to each target mean. Labels are `p<target>`.
std::vector<ReturnPortfolio> reproduction_portfolios(const KauffmanConstraints& c, std::uint64_t seed,
                                                     std::span<const double> targets, bool compress);

/// Cartesian product of portfolios and MOCs sharing the other settings of `base`.
std::vector<ScenarioConfig> scenario_grid(const ScenarioConfig& base,
                                          std::span<const ReturnPortfolio> portfolios,
                                          std::span<const double> mocs);

std::string portfolio_label_for(double target);

}  // namespace vbank
