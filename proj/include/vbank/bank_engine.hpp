#pragma once

#include "vbank/din.hpp"
#include "vbank/portfolio.hpp"

#include <optional>
#include <vector>

namespace vbank {

/// One venture-bank scenario. Rates are fractions per year.
struct ScenarioConfig {
    double original_capital = 1.0;
    double moc = 30.0;  // outstanding investments / original capital
    ReturnPortfolio portfolio;
    DinTerms din_terms;
    double bank_rate = 0.0;
    int horizon_years = 10;
    double surplus_rate = 0.0;

    void validate() const;
};

/// End-of-year position. Investments are carried at nil in `equity_estimate`,
/// so its change is exactly the year's cash flows; `book_equity` adds the
/// still-outstanding principal at cost.
struct BankYear {
    int year = 0;
    double interest_accrued = 0.0;
    double premiums_paid = 0.0;
    double din_receipts = 0.0;
    double exit_proceeds = 0.0;
    double surplus_interest = 0.0;
    double debt_balance_end = 0.0;
    double cash_surplus_end = 0.0;
    double equity_estimate = 0.0;
    double book_equity = 0.0;
};

struct BankResult {
    double final_multiple = 0.0;  // final equity / original capital; break-even 1.0
    bool survived = false;
    bool interim_insolvency = false;  // book equity below zero before the horizon
    std::vector<BankYear> ledger;     // years 0..horizon
};

/// Ten-year ledger of a bank whose investments are fully financed with
/// interbank debt. Failed funds resolve at the payoff year; survivors exit at
/// the horizon.
BankResult simulate_bank(const ScenarioConfig& cfg);

/// Bank rate in [lo, hi] at which the final multiple crosses 1.0, to 1e-6.
/// Empty when the bracket holds no crossing; BracketError when it holds more
/// than one.
std::optional<double> break_even_rate(ScenarioConfig cfg, double lo, double hi);

inline constexpr double kBreakEvenRateTolerance = 1e-6;

/// Locates the single point in [lo, hi] where `holds` flips, to within
/// `tolerance`. Scans the bracket first: empty with no flip, BracketError with
/// more than one.
template <typename Predicate>
std::optional<double> single_crossing(Predicate&& holds, double lo, double hi, double tolerance);

}  // namespace vbank

#include "vbank/detail/crossing.hpp"

namespace vbank {

}  // namespace vbank
