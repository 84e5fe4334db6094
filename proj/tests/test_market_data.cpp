#include "vbank/errors.hpp"
#include "vbank/market_data.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

using namespace vbank;

namespace {

LiborSeries parse(const std::string& text) {
    std::istringstream in(text);
    return parse_libor_csv(in);
}

const std::filesystem::path kSnapshot = std::filesystem::path(VBANK_TEST_DATA_DIR) / "USD12MD156N_monthly.csv";

}  // namespace

TEST_SUITE("market_data") {

TEST_CASE("missing-value rows are skipped") {
    auto s = parse("DATE,USD12MD156N\n2016-01-04,1.14\n2016-01-05,.\n2016-01-06,1.15\n");
    REQUIRE(s.size() == 2);
    CHECK(s.observations()[0].rate == doctest::Approx(1.14));
    CHECK(s.observations()[1].date == Date{2016, 1, 6});
}

TEST_CASE("malformed date reports its line") {
    try {
        parse("DATE,X\n2016-01-04,1.0\n2016-13-45,1.0\n");
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("non-numeric value is an error, not a skip") {
    CHECK_THROWS_AS(parse("DATE,X\n2016-01-04,NaN?\n"), LoadError);
    CHECK_THROWS_AS(parse("DATE,X\n2016-01-04,\n"), LoadError);
    CHECK_THROWS_AS(parse("DATE,X\n2016-01-04,1.0x\n"), LoadError);
}

TEST_CASE("zero usable rows is an empty-series error") {
    CHECK_THROWS_AS(parse("DATE,X\n2016-01-04,.\n"), EmptySeriesError);
    CHECK_THROWS_AS(parse("DATE,X\n"), EmptySeriesError);
}

TEST_CASE("header and ordering are enforced") {
    CHECK_THROWS_AS(parse("DATE\n2016-01-04,1.0\n"), LoadError);
    CHECK_THROWS_AS(parse("DATE,X\n2016-01-05,1.0\n2016-01-04,1.0\n"), LoadError);
    CHECK_THROWS_AS(parse("DATE,X\n2016-01-05,1.0\n2016-01-05,1.0\n"), LoadError);
    CHECK_THROWS_AS(parse("DATE,X\n2016-01-05,51\n"), LoadError);
    CHECK_THROWS_AS(load_libor_csv("/nonexistent/libor.csv"), IoError);
}

TEST_CASE("date parsing") {
    CHECK(Date::parse("2016-02-29") == Date{2016, 2, 29});
    CHECK_THROWS_AS(Date::parse("2015-02-29"), DomainError);
    CHECK_THROWS_AS(Date::parse("2016-1-01"), DomainError);
    CHECK(Date{1996, 1, 2}.iso() == "1996-01-02");
}

TEST_CASE("window statistics on small series") {
    auto s = parse("DATE,X\n2000-01-01,2.0\n2000-02-01,2.0\n2000-03-01,2.0\n");
    auto w = window_stats(s, 2000, 2000);
    CHECK(w.median == 2.0);
    CHECK(w.mean == 2.0);
    CHECK(w.count == 3);

    auto even = parse("DATE,X\n2000-01-01,1.0\n2000-02-01,4.0\n2000-03-01,2.0\n2000-04-01,10.0\n");
    auto e = window_stats(even, 2000, 2000);
    CHECK(e.median == doctest::Approx(3.0));
    CHECK(e.mean == doctest::Approx(4.25));

    auto jan_feb = window_stats(even, Date{2000, 1, 1}, Date{2000, 2, 1});
    CHECK(jan_feb.count == 2);  // both bounds inclusive

    CHECK_THROWS_AS(window_stats(s, 2001, 2002), EmptyWindowError);
    CHECK_THROWS_AS(window_stats(s, Date{2000, 3, 1}, Date{2000, 1, 1}), DomainError);
}

TEST_CASE("window properties on random series") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<RateObservation> obs;
        std::size_t numeric = 0;
        std::ostringstream csv;
        csv << "DATE,X\n";
        for (int m = 1; m <= 12; ++m)
            for (int d : {1, 15}) {
                const bool missing = rng() % 5 == 0;
                const double v = static_cast<double>(rng() % 1000) / 100.0;
                csv << Date{2010, m, d}.iso() << ',' << (missing ? std::string(".") : std::to_string(v)) << '\n';
                numeric += !missing;
            }
        if (numeric == 0) continue;
        auto series = parse(csv.str());
        CHECK(series.size() == numeric);

        const auto all = window_stats(series, Date::min(), Date::max());
        const auto whole = window_stats(series, series.first_date(), series.last_date());
        CHECK(all.mean == whole.mean);
        CHECK(all.median == whole.median);
        CHECK(all.count == numeric);
        CHECK(all.min <= all.median);
        CHECK(all.median <= all.max);
        CHECK(all.min <= all.mean);
        CHECK(all.mean <= all.max + 1e-12);
    }
}

TEST_CASE("funds rate adds the interbank spread") {
    CHECK(funds_rate(4.26) == doctest::Approx(4.51).epsilon(1e-12));
    CHECK(funds_rate(4.58) == doctest::Approx(4.83).epsilon(1e-12));
    CHECK(funds_rate(1.57) == doctest::Approx(1.82).epsilon(1e-12));
    CHECK(funds_rate(0.0) == 0.25);
    CHECK_THROWS_AS(funds_rate(-0.01), DomainError);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const double a = static_cast<double>(rng() % 10000) / 1000.0;
        const double d = static_cast<double>(rng() % 1000 + 1) / 1000.0;
        CHECK(funds_rate(a + d) > funds_rate(a));
        CHECK(funds_rate(a + d) - funds_rate(a) == doctest::Approx(d).epsilon(1e-9));
    }
}

TEST_CASE("bundled snapshot loads") {
    auto s = load_libor_csv(kSnapshot);
    CHECK(s.first_date() == Date{1986, 1, 1});
    CHECK(s.last_date() == Date{2016, 12, 1});
    CHECK(s.size() == 372);
}

// Daily extremes quoted for 1996-2016; the bundled file holds monthly averages.
TEST_CASE("snapshot 1996-2016 range matches the published high and low") {
    auto w = window_stats(load_libor_csv(kSnapshot), 1996, 2016);
    CHECK(std::abs(w.max - 7.50) <= 0.05);
    CHECK(std::abs(w.min - 0.53) <= 0.05);
}

}
