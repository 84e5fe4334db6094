#pragma once

#include "vbank/portfolio.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace vbank {

/// What the annual DIN premium rate is charged on.
enum class PremiumBase {
    FaceAnnual,        // insured face (coverage x principal), every year in force
    PrincipalAnnual,   // loan principal, every year in force
    PrincipalUpfront,  // loan principal, once at year 0
};

/// How a defaulted fund's claim is sized.
enum class PayoutBasis {
    ShortfallCapped,  // min(loss, insured face)
    FullFace,         // insured face whenever the fund defaults
};

std::string_view to_string(PremiumBase b);
std::string_view to_string(PayoutBasis b);
PremiumBase parse_premium_base(std::string_view text);
PayoutBasis parse_payout_basis(std::string_view text);

/// Default Insurance Note contract terms. Fractions, not percentages.
struct DinTerms {
    double coverage_fraction = 0.0388;
    double coverage_floor = 0.0288;
    double premium_rate = 0.05;
    PremiumBase premium_base = PremiumBase::FaceAnnual;
    PayoutBasis payout_basis = PayoutBasis::ShortfallCapped;
    int payoff_year = 5;
    int term_years = 10;

    /// Throws DomainError when an invariant fails.
    void validate() const;
    /// Working coverage as a multiple of the reserve floor.
    double coverage_ratio() const { return coverage_fraction / coverage_floor; }
    /// Premium charged on one fund in `year` (0..term_years).
    double premium_due(double principal, double multiple, int year) const;
};

struct TermsReport {
    bool valid = false;
    double coverage_ratio = 0.0;
    std::string message;
};

/// Non-throwing validation that also reports the coverage/floor ratio.
TermsReport check_terms(const DinTerms& t);

enum class CoverageMethod { SigmaClamp, BreakevenClamp };
std::string_view to_string(CoverageMethod m);

/// Coverage sizing result. Percentages.
struct CoverageAssessment {
    CoverageMethod method = CoverageMethod::SigmaClamp;
    double clamp_loss = 0.0;
    double recommended_coverage = 0.0;
};

/// Resets funds above break-even plus one standard deviation to 1 and sizes
/// coverage as the floor plus the resulting portfolio loss.
CoverageAssessment coverage_sigma_method(const ReturnPortfolio& p, double floor_pct);
/// Same, resetting every fund above break-even.
CoverageAssessment coverage_breakeven_method(const ReturnPortfolio& p, double floor_pct);

/// Claim paid on a fund of `principal` that returned `multiple`. Zero at or
/// above break-even.
double din_payout(double principal, double multiple, const DinTerms& terms);

struct UnderwriterYear {
    double premium_income = 0.0;
    double payouts = 0.0;
    double carry_cost = 0.0;
};

struct UnderwriterResult {
    std::vector<UnderwriterYear> yearly;  // index = year, 0..term_years
    double total_premiums = 0.0;
    double total_payouts = 0.0;
    double total_carry = 0.0;
    double insured_face = 0.0;
    double gross_return = 0.0;  // (premiums - payouts - carry) / insured face
};

/// Underwriter profit and loss for one cohort of DINs written on every fund.
/// Payouts are financed at `bank_rate` (fraction) from the payoff year to term.
UnderwriterResult underwriter_ledger(const ReturnPortfolio& p, const DinTerms& terms,
                                     double bank_rate, double principal_per_fund);

}  // namespace vbank
