#include "oracles.hpp"
#include "vbank/din.hpp"
#include "vbank/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace vbank;

TEST_SUITE("din") {

TEST_CASE("terms validation and coverage ratio") {
    DinTerms t;
    auto report = check_terms(t);
    CHECK(report.valid);
    CHECK(std::abs(report.coverage_ratio - 1.347) <= 0.001);

    DinTerms below = t;
    below.coverage_fraction = 0.02;
    CHECK_FALSE(check_terms(below).valid);
    CHECK_THROWS_AS(below.validate(), DomainError);

    DinTerms late = t;
    late.payoff_year = 11;
    CHECK_THROWS_AS(late.validate(), DomainError);
    late.payoff_year = 0;
    CHECK_THROWS_AS(late.validate(), DomainError);

    DinTerms neg = t;
    neg.premium_rate = -0.01;
    CHECK_THROWS_AS(neg.validate(), DomainError);
}

TEST_CASE("enum text round trips") {
    for (auto b : {PremiumBase::FaceAnnual, PremiumBase::PrincipalAnnual, PremiumBase::PrincipalUpfront})
        CHECK(parse_premium_base(to_string(b)) == b);
    for (auto b : {PayoutBasis::ShortfallCapped, PayoutBasis::FullFace}) CHECK(parse_payout_basis(to_string(b)) == b);
    CHECK_THROWS_AS(parse_premium_base("weekly"), ConfigError);
}

TEST_CASE("coverage sizing, hand-computed portfolio") {
    // sigma ~ 1.466, threshold ~ 2.466: only 3.6 resets; clamped mean 0.7
    ReturnPortfolio p({0.2, 0.9, 3.6}, "h");
    auto sigma = coverage_sigma_method(p, 2.88);
    CHECK(sigma.method == CoverageMethod::SigmaClamp);
    CHECK(sigma.clamp_loss == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(sigma.recommended_coverage == doctest::Approx(32.88).epsilon(1e-12));
    auto be = coverage_breakeven_method(p, 2.88);
    CHECK(be.clamp_loss == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(be.recommended_coverage == doctest::Approx(32.88).epsilon(1e-12));
}

TEST_CASE("coverage sizing without losses") {
    ReturnPortfolio ones(std::vector<double>(7, 1.0), "ones");
    CHECK(coverage_sigma_method(ones, 2.88).clamp_loss == 0.0);
    CHECK(coverage_sigma_method(ones, 2.88).recommended_coverage == 2.88);
    ReturnPortfolio winners({1.0, 1.5, 2.0, 9.0}, "w");
    CHECK(coverage_breakeven_method(winners, 2.88).clamp_loss == 0.0);
    CHECK(coverage_breakeven_method(winners, 2.88).recommended_coverage == 2.88);
}

TEST_CASE("coverage sizing on the synthesized Kauffman portfolio") {
    const auto p = synthesize_kauffman(KauffmanConstraints{}, 42).portfolio;
    auto sigma = coverage_sigma_method(p, 2.88);
    auto be = coverage_breakeven_method(p, 2.88);
    CHECK(std::abs(sigma.clamp_loss - 2.72) <= 0.05);
    CHECK(std::abs(sigma.recommended_coverage - 5.60) <= 0.05);
    CHECK(std::abs(be.clamp_loss - 17.45) <= 0.05);
    CHECK(std::abs(be.recommended_coverage - 20.33) <= 0.05);
}

TEST_CASE("break-even method never recommends less than the sigma method") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        ReturnPortfolio p(oracle::random_multiples(rng, 1 + static_cast<int>(rng() % 50), 5.0), "r");
        const double floor = oracle::uniform(rng, 0.0, 5.0);
        const double be = coverage_breakeven_method(p, floor).recommended_coverage;
        const double sg = coverage_sigma_method(p, floor).recommended_coverage;
        CHECK(be >= sg);
        CHECK(sg >= floor);
    }
}

TEST_CASE("din_payout") {
    DinTerms t;
    CHECK(din_payout(100, 1.2, t) == 0.0);
    CHECK(din_payout(100, 1.0, t) == 0.0);
    CHECK(din_payout(100, 0.5, t) == doctest::Approx(3.88).epsilon(1e-12));
    CHECK(din_payout(100, 0.99, t) == doctest::Approx(1.00).epsilon(1e-12));
    t.payout_basis = PayoutBasis::FullFace;
    CHECK(din_payout(100, 0.99, t) == doctest::Approx(3.88).epsilon(1e-12));
    CHECK_THROWS_AS(din_payout(0, 0.5, t), DomainError);
}

TEST_CASE("din_payout is capped and non-increasing in the multiple") {
    DinTerms t;
    std::mt19937_64 rng(19);
    for (int i = 0; i < 500; ++i) {
        const double principal = oracle::uniform(rng, 0.1, 1000.0);
        const double a = oracle::uniform(rng, 0.0, 1.5);
        const double b = a + oracle::uniform(rng, 0.0, 0.5);
        const double pa = din_payout(principal, a, t), pb = din_payout(principal, b, t);
        CHECK(pa >= pb);
        CHECK(pb >= 0.0);
        CHECK(pa <= t.coverage_fraction * principal * (1 + 1e-15));
    }
}

TEST_CASE("underwriter ledger, all survivors") {
    ReturnPortfolio p({1.0, 1.2, 2.5}, "w");
    for (double rate : {0.0, 0.03, 0.08}) {
        auto r = underwriter_ledger(p, DinTerms{}, rate, 10.0);
        CHECK(r.gross_return == doctest::Approx(0.50).epsilon(1e-12));
        CHECK(r.total_payouts == 0.0);
        CHECK(r.total_carry == 0.0);
    }
}

TEST_CASE("underwriter ledger, single total loss at zero interest") {
    auto r = underwriter_ledger(ReturnPortfolio({0.0}, "loss"), DinTerms{}, 0.0, 1.0);
    const double face = 0.0388;
    CHECK(r.insured_face == doctest::Approx(face));
    CHECK(r.total_premiums == doctest::Approx(0.25 * face).epsilon(1e-12));
    CHECK(r.total_payouts == doctest::Approx(face).epsilon(1e-12));
    CHECK(std::abs(r.gross_return - (-0.75)) <= 1e-9);
    REQUIRE(r.yearly.size() == 11);
    CHECK(r.yearly[5].payouts == doctest::Approx(face));
    CHECK(r.yearly[6].premium_income == 0.0);
}

TEST_CASE("underwriter carry compounds from the payoff year") {
    auto r = underwriter_ledger(ReturnPortfolio({0.0}, "loss"), DinTerms{}, 0.05, 1.0);
    const double face = 0.0388;
    CHECK(r.total_carry == doctest::Approx(face * (std::pow(1.05, 5) - 1.0)).epsilon(1e-12));
    for (int y = 0; y <= 5; ++y) CHECK(r.yearly[static_cast<std::size_t>(y)].carry_cost == 0.0);
    CHECK(r.yearly[6].carry_cost == doctest::Approx(face * 0.05));
}

TEST_CASE("underwriter premium bases") {
    ReturnPortfolio p({0.5, 1.5}, "m");
    DinTerms t;
    t.premium_base = PremiumBase::PrincipalUpfront;
    auto up = underwriter_ledger(p, t, 0.0, 1.0);
    CHECK(up.yearly[0].premium_income == doctest::Approx(0.10));
    CHECK(up.total_premiums == doctest::Approx(0.10));
    t.premium_base = PremiumBase::PrincipalAnnual;
    auto ann = underwriter_ledger(p, t, 0.0, 1.0);
    CHECK(ann.total_premiums == doctest::Approx(0.05 * (5 + 10)));
}

TEST_CASE("underwriter ledger invariants") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        ReturnPortfolio p(oracle::random_multiples(rng, 1 + static_cast<int>(rng() % 40), 3.0), "r");
        DinTerms t;
        double prev = 1e300;
        for (double rate = 0.0; rate <= 0.10; rate += 0.005) {
            auto r = underwriter_ledger(p, t, rate, 2.0);
            for (const auto& y : r.yearly) {
                CHECK(y.premium_income >= 0.0);
                CHECK(y.payouts >= 0.0);
                CHECK(y.carry_cost >= 0.0);
            }
            CHECK(r.gross_return <= prev);
            prev = r.gross_return;
        }
    }
}

TEST_CASE("underwriter errors") {
    CHECK_THROWS_AS(underwriter_ledger(ReturnPortfolio({1.0}, "x"), DinTerms{}, -0.01, 1.0), DomainError);
    DinTerms zero;
    zero.coverage_fraction = 0.0;
    zero.coverage_floor = 0.0;
    CHECK_THROWS_AS(underwriter_ledger(ReturnPortfolio({1.0}, "x"), zero, 0.01, 1.0), UndefinedReturnError);
}

TEST_CASE("underwriters stay profitable on the 1.31 portfolio across the historical LIBOR range") {
    const auto comp = compress_pairs(synthesize_kauffman(KauffmanConstraints{}, 42).portfolio);
    const auto p131 = shift_to_mean(comp, 1.31);
    for (double libor = 0.53; libor <= 7.5001; libor += 0.25) {
        const double rate = (libor + 0.25) / 100.0;
        CHECK(underwriter_ledger(p131, DinTerms{}, rate, 1.0).gross_return > 0.0);
    }
    CHECK(underwriter_ledger(p131, DinTerms{}, 0.0775, 1.0).gross_return > 0.0);
}

}
