#include "vbank/calibration.hpp"

#include "vbank/bank_engine.hpp"
#include "vbank/config.hpp"
#include "vbank/errors.hpp"
#include "vbank/market_data.hpp"

#include <ostream>
#include <string>

namespace vbank {

std::string_view to_string(RateReading r) { return r == RateReading::BankRate ? "bank_rate" : "libor"; }

RateReading parse_rate_reading(std::string_view text) {
    if (text == "bank_rate") return RateReading::BankRate;
    if (text == "libor") return RateReading::Libor;
    throw ConfigError("unknown rate reading '" + std::string(text) + "'");
}

double bank_rate_for(RateReading reading, double quoted_pct) {
    return (reading == RateReading::Libor ? funds_rate(quoted_pct) : quoted_pct) / 100.0;
}

CalibrationReport calibrate(const ReturnPortfolio& portfolio, const DinTerms& terms,
                            const CalibrationAnchors& anchors) {
    CalibrationReport report;
    report.anchors = anchors;

    auto run = [&](const DinTerms& t, double rate, double moc) {
        ScenarioConfig cfg;
        cfg.portfolio = portfolio;
        cfg.din_terms = t;
        cfg.horizon_years = t.term_years;
        cfg.bank_rate = rate;
        cfg.moc = moc;
        return simulate_bank(cfg).final_multiple;
    };

    for (auto base : {PremiumBase::FaceAnnual, PremiumBase::PrincipalAnnual, PremiumBase::PrincipalUpfront})
        for (auto reading : {RateReading::BankRate, RateReading::Libor}) {
            CalibrationOutcome o;
            o.mode = {base, reading};
            o.bank_rate = bank_rate_for(reading, anchors.quoted_rate_pct);

            DinTerms high = terms;
            high.premium_base = base;
            high.coverage_fraction = anchors.coverage;
            DinTerms working = high;
            working.coverage_fraction = anchors.working_coverage;

            o.multiple_low = run(high, o.bank_rate, anchors.moc_low);
            o.multiple_high = run(high, o.bank_rate, anchors.moc_high);
            o.multiple_low_working = run(working, o.bank_rate, anchors.moc_low);
            o.uplift = o.multiple_low_working - o.multiple_low;
            o.residual_low = o.multiple_low - anchors.multiple_low;
            o.residual_high = o.multiple_high - anchors.multiple_high;
            o.residual_uplift = o.uplift - anchors.uplift;
            o.score = o.residual_low * o.residual_low + o.residual_high * o.residual_high +
                      o.residual_uplift * o.residual_uplift;
            report.outcomes.push_back(o);
        }

    for (std::size_t i = 1; i < report.outcomes.size(); ++i)
        if (report.outcomes[i].score < report.outcomes[report.best].score) report.best = i;
    return report;
}

void write_calibration_report(std::ostream& out, const CalibrationReport& r) {
    const auto& a = r.anchors;
    out << "# anchors: quoted_rate_pct=" << format_double(a.quoted_rate_pct)
        << " coverage=" << format_double(a.coverage) << " working_coverage=" << format_double(a.working_coverage)
        << " multiple@" << format_double(a.moc_low) << "X=" << format_double(a.multiple_low) << " multiple@"
        << format_double(a.moc_high) << "X=" << format_double(a.multiple_high)
        << " uplift=" << format_double(a.uplift) << '\n';
    out << "premium_base,rate_reading,bank_rate_pct,multiple_low,multiple_high,multiple_low_working,uplift,"
           "residual_low,residual_high,residual_uplift,score\n";
    for (const auto& o : r.outcomes)
        out << to_string(o.mode.premium_base) << ',' << to_string(o.mode.rate_reading) << ','
            << format_fixed(o.bank_rate * 100.0, 4) << ',' << format_fixed(o.multiple_low, 6) << ','
            << format_fixed(o.multiple_high, 6) << ',' << format_fixed(o.multiple_low_working, 6) << ','
            << format_fixed(o.uplift, 6) << ',' << format_fixed(o.residual_low, 6) << ','
            << format_fixed(o.residual_high, 6) << ',' << format_fixed(o.residual_uplift, 6) << ','
            << format_fixed(o.score, 6) << '\n';
    const auto& w = r.winner();
    out << "best_premium_base=" << to_string(w.mode.premium_base) << '\n'
        << "best_rate_reading=" << to_string(w.mode.rate_reading) << '\n';
}

}  // namespace vbank
