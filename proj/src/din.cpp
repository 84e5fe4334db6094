#include "vbank/din.hpp"

#include "vbank/config.hpp"
#include "vbank/errors.hpp"

#include <algorithm>
#include <cmath>

namespace vbank {

std::string_view to_string(PremiumBase b) {
    switch (b) {
        case PremiumBase::FaceAnnual: return "face_annual";
        case PremiumBase::PrincipalAnnual: return "principal_annual";
        case PremiumBase::PrincipalUpfront: return "principal_upfront";
    }
    return "?";
}

std::string_view to_string(PayoutBasis b) {
    return b == PayoutBasis::ShortfallCapped ? "shortfall_capped" : "full_face";
}

std::string_view to_string(CoverageMethod m) {
    return m == CoverageMethod::SigmaClamp ? "sigma_clamp" : "breakeven_clamp";
}

PremiumBase parse_premium_base(std::string_view text) {
    for (auto b : {PremiumBase::FaceAnnual, PremiumBase::PrincipalAnnual, PremiumBase::PrincipalUpfront})
        if (text == to_string(b)) return b;
    throw ConfigError("unknown premium base '" + std::string(text) + "'");
}

PayoutBasis parse_payout_basis(std::string_view text) {
    for (auto b : {PayoutBasis::ShortfallCapped, PayoutBasis::FullFace})
        if (text == to_string(b)) return b;
    throw ConfigError("unknown payout basis '" + std::string(text) + "'");
}

void DinTerms::validate() const {
    if (!(coverage_floor >= 0.0) || !(coverage_fraction >= coverage_floor) || coverage_fraction > 1.0)
        throw DomainError("coverage must satisfy floor <= coverage <= 1");
    if (!(premium_rate >= 0.0)) throw DomainError("premium rate must be non-negative");
    if (!(payoff_year > 0 && payoff_year <= term_years))
        throw DomainError("payoff year must lie in 1..term");
}

double DinTerms::premium_due(double principal, double multiple, int year) const {
    const int last = multiple < 1.0 ? payoff_year : term_years;
    switch (premium_base) {
        case PremiumBase::FaceAnnual:
            return year >= 1 && year <= last ? premium_rate * coverage_fraction * principal : 0.0;
        case PremiumBase::PrincipalAnnual:
            return year >= 1 && year <= last ? premium_rate * principal : 0.0;
        case PremiumBase::PrincipalUpfront:
            return year == 0 ? premium_rate * principal : 0.0;
    }
    return 0.0;
}

TermsReport check_terms(const DinTerms& t) {
    TermsReport r;
    r.coverage_ratio = t.coverage_floor > 0.0 ? t.coverage_ratio() : 0.0;
    try {
        t.validate();
        r.valid = true;
        r.message = "ok";
    } catch (const DomainError& e) {
        r.message = e.what();
    }
    return r;
}

namespace {

CoverageAssessment assess(const ReturnPortfolio& p, double floor_pct, double threshold,
                          CoverageMethod method) {
    CoverageAssessment a;
    a.method = method;
    a.clamp_loss = std::max(0.0, (1.0 - clamped_mean(p, threshold)) * 100.0);
    a.recommended_coverage = floor_pct + a.clamp_loss;
    return a;
}

}  // namespace

CoverageAssessment coverage_sigma_method(const ReturnPortfolio& p, double floor_pct) {
    return assess(p, floor_pct, 1.0 + portfolio_stats(p).stddev, CoverageMethod::SigmaClamp);
}

CoverageAssessment coverage_breakeven_method(const ReturnPortfolio& p, double floor_pct) {
    return assess(p, floor_pct, 1.0, CoverageMethod::BreakevenClamp);
}

double din_payout(double principal, double multiple, const DinTerms& terms) {
    if (!(principal > 0.0)) throw DomainError("principal must be positive");
    if (multiple >= 1.0) return 0.0;
    const double face = terms.coverage_fraction * principal;
    if (terms.payout_basis == PayoutBasis::FullFace) return face;
    return std::min((1.0 - multiple) * principal, face);
}

UnderwriterResult underwriter_ledger(const ReturnPortfolio& p, const DinTerms& terms,
                                     double bank_rate, double principal_per_fund) {
    terms.validate();
    if (!(bank_rate >= 0.0)) throw DomainError("bank rate must be non-negative");
    if (p.empty()) throw DomainError("underwriter ledger of an empty portfolio");

    UnderwriterResult r;
    r.insured_face = terms.coverage_fraction * principal_per_fund * static_cast<double>(p.size());
    if (!(r.insured_face > 0.0)) throw UndefinedReturnError("insured face is zero");

    r.yearly.assign(static_cast<std::size_t>(terms.term_years) + 1, {});
    double claims = 0.0;
    for (double m : p.multiples()) {
        for (int y = 0; y <= terms.term_years; ++y)
            r.yearly[static_cast<std::size_t>(y)].premium_income +=
                terms.premium_due(principal_per_fund, m, y);
        claims += din_payout(principal_per_fund, m, terms);
    }
    r.yearly[static_cast<std::size_t>(terms.payoff_year)].payouts = claims;

    // Claims are financed from the payoff year onward; interest compounds.
    double financed = claims;
    for (int y = terms.payoff_year + 1; y <= terms.term_years; ++y) {
        const double interest = financed * bank_rate;
        r.yearly[static_cast<std::size_t>(y)].carry_cost = interest;
        financed += interest;
    }

    for (const auto& row : r.yearly) {
        r.total_premiums += row.premium_income;
        r.total_payouts += row.payouts;
        r.total_carry += row.carry_cost;
    }
    r.gross_return = (r.total_premiums - r.total_payouts - r.total_carry) / r.insured_face;
    return r;
}

}  // namespace vbank
