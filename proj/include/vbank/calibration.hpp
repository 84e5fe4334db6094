#pragma once

#include "vbank/din.hpp"
#include "vbank/portfolio.hpp"

#include <iosfwd>
#include <string_view>
#include <vector>

namespace vbank {

/// How a quoted "interbank funds rate" maps onto the bank's borrowing rate.
enum class RateReading {
    BankRate,  // the quote is the bank rate itself
    Libor,     // the quote is LIBOR; the bank pays LIBOR + spread
};

std::string_view to_string(RateReading r);
RateReading parse_rate_reading(std::string_view text);
/// Bank rate (fraction) for a quoted percentage under `reading`.
double bank_rate_for(RateReading reading, double quoted_pct);

/// Reference outcomes for the 1.31 portfolio at a 2% funds rate.
struct CalibrationAnchors {
    double quoted_rate_pct = 2.0;
    double coverage = 0.056;
    double working_coverage = 0.0388;
    double moc_low = 30.0;
    double moc_high = 43.0;
    double multiple_low = 1.50;   // at moc_low, coverage
    double multiple_high = 2.15;  // at moc_high, coverage
    double uplift = 0.45;         // working coverage vs coverage, at moc_low
};

struct CalibrationMode {
    PremiumBase premium_base = PremiumBase::FaceAnnual;
    RateReading rate_reading = RateReading::BankRate;
};

struct CalibrationOutcome {
    CalibrationMode mode;
    double bank_rate = 0.0;
    double multiple_low = 0.0;
    double multiple_high = 0.0;
    double multiple_low_working = 0.0;
    double uplift = 0.0;
    double residual_low = 0.0;
    double residual_high = 0.0;
    double residual_uplift = 0.0;
    double score = 0.0;  // sum of squared residuals
};

struct CalibrationReport {
    CalibrationAnchors anchors;
    std::vector<CalibrationOutcome> outcomes;  // every premium base x rate reading
    std::size_t best = 0;

    const CalibrationOutcome& winner() const { return outcomes.at(best); }
};

/// Runs the bank model for every premium base and rate reading on `portfolio`
/// and ranks the modes by squared distance to the anchors.
CalibrationReport calibrate(const ReturnPortfolio& portfolio, const DinTerms& terms,
                            const CalibrationAnchors& anchors = {});

void write_calibration_report(std::ostream& out, const CalibrationReport& r);

}  // namespace vbank
