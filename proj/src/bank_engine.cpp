#include "vbank/bank_engine.hpp"

#include "vbank/config.hpp"
#include "vbank/errors.hpp"

#include <cmath>

namespace vbank {

void ScenarioConfig::validate() const {
    if (!(original_capital > 0.0)) throw DomainError("original capital must be positive");
    if (!(moc > 0.0)) throw DomainError("MOC must be positive");
    if (!(bank_rate >= 0.0)) throw DomainError("bank rate must be non-negative");
    if (!(surplus_rate >= 0.0)) throw DomainError("surplus rate must be non-negative");
    if (portfolio.empty()) throw DomainError("scenario has no portfolio");
    din_terms.validate();
    if (horizon_years != din_terms.term_years)
        throw DomainError("horizon must equal the DIN term");
}

namespace {

// Bank-side premium schedule, kept separate from DinTerms::premium_due so the
// two ledgers can be checked against each other.
double premiums_for_year(const ScenarioConfig& cfg, double principal, int year) {
    const auto& t = cfg.din_terms;
    double total = 0.0;
    for (double m : cfg.portfolio.multiples()) {
        const bool in_force = year >= 1 && year <= (m < 1.0 ? t.payoff_year : cfg.horizon_years);
        switch (t.premium_base) {
            case PremiumBase::FaceAnnual:
                if (in_force) total += t.premium_rate * t.coverage_fraction * principal;
                break;
            case PremiumBase::PrincipalAnnual:
                if (in_force) total += t.premium_rate * principal;
                break;
            case PremiumBase::PrincipalUpfront:
                if (year == 0) total += t.premium_rate * principal;
                break;
        }
    }
    return total;
}

}  // namespace

BankResult simulate_bank(const ScenarioConfig& cfg) {
    cfg.validate();
    const double capital = cfg.original_capital;
    const double invested = cfg.moc * capital;
    const double principal = invested / static_cast<double>(cfg.portfolio.size());
    const int horizon = cfg.horizon_years;

    BankResult result;
    result.ledger.reserve(static_cast<std::size_t>(horizon) + 1);

    double debt = invested;
    double surplus = 0.0;
    double outstanding = invested;  // principal still invested, at cost

    auto settle = [&](double cash) {  // apply cash to debt; the excess is surplus
        const double repay = std::min(cash, debt);
        debt -= repay;
        surplus += cash - repay;
    };
    auto pay = [&](double amount) {  // draw on surplus first, then borrow
        const double from_surplus = std::min(amount, surplus);
        surplus -= from_surplus;
        debt += amount - from_surplus;
    };

    {
        BankYear row;
        row.premiums_paid = premiums_for_year(cfg, principal, 0);
        pay(row.premiums_paid);
        row.debt_balance_end = debt;
        row.cash_surplus_end = surplus;
        row.equity_estimate = capital + surplus - debt;
        row.book_equity = row.equity_estimate + outstanding;
        result.ledger.push_back(row);
    }

    for (int y = 1; y <= horizon; ++y) {
        BankYear row;
        row.year = y;
        row.interest_accrued = debt * cfg.bank_rate;
        debt += row.interest_accrued;
        row.surplus_interest = surplus * cfg.surplus_rate;
        surplus += row.surplus_interest;

        row.premiums_paid = premiums_for_year(cfg, principal, y);
        pay(row.premiums_paid);

        for (double m : cfg.portfolio.multiples()) {
            const bool failed = m < 1.0;
            if (failed && y == cfg.din_terms.payoff_year) {
                row.exit_proceeds += m * principal;
                row.din_receipts += din_payout(principal, m, cfg.din_terms);
                outstanding -= principal;
            } else if (!failed && y == horizon) {
                row.exit_proceeds += m * principal;
                outstanding -= principal;
            }
        }
        settle(row.exit_proceeds + row.din_receipts);

        row.debt_balance_end = debt;
        row.cash_surplus_end = surplus;
        row.equity_estimate = capital + surplus - debt;
        row.book_equity = row.equity_estimate + std::max(outstanding, 0.0);
        if (y < horizon && row.book_equity < 0.0) result.interim_insolvency = true;
        result.ledger.push_back(row);
    }

    result.final_multiple = result.ledger.back().equity_estimate / capital;
    result.survived = result.final_multiple >= 1.0;
    return result;
}

std::optional<double> break_even_rate(ScenarioConfig cfg, double lo, double hi) {
    if (!(lo < hi)) throw DomainError("break-even bracket needs lo < hi");
    if (!(lo >= 0.0)) throw DomainError("break-even bracket must be non-negative");

    auto survives = [&cfg](double rate) {
        cfg.bank_rate = rate;
        return simulate_bank(cfg).final_multiple >= 1.0;
    };
    return single_crossing(survives, lo, hi, kBreakEvenRateTolerance);
}

}  // namespace vbank
