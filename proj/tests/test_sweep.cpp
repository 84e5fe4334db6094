#include "vbank/calibration.hpp"
#include "vbank/config.hpp"
#include "vbank/errors.hpp"
#include "vbank/report.hpp"
#include "vbank/sweep.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vbank;

namespace {

std::vector<ScenarioConfig> six_curves() {
    const double targets[] = {1.10, 1.31, 1.50};
    const double mocs[] = {30, 43};
    const auto ps = reproduction_portfolios(KauffmanConstraints{}, 42, targets, true);
    return scenario_grid(ScenarioConfig{}, ps, mocs);
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("rate grid parsing") {
    const auto grid = default_rate_grid();
    REQUIRE(grid.size() == 29);
    CHECK(grid.front() == 0.53);
    CHECK(grid[1] == doctest::Approx(0.78));
    CHECK(grid[27] == doctest::Approx(7.28));
    CHECK(grid.back() == 7.50);
    CHECK(parse_rate_grid("1:2:0.5") == std::vector<double>{1.0, 1.5, 2.0});
    CHECK(parse_rate_grid("1.82") == std::vector<double>{1.82});
    CHECK(parse_rate_grid("1,2,4") == std::vector<double>{1, 2, 4});
    CHECK_THROWS_AS(parse_rate_grid("2:1:0.5"), ConfigError);
    CHECK_THROWS_AS(parse_rate_grid("1:2:0"), ConfigError);
    CHECK_THROWS_AS(parse_rate_grid("a:b:c"), ConfigError);
}

TEST_CASE("singleton sweep") {
    const auto cfgs = six_curves();
    const double grid[] = {1.82};
    auto t = run_sweep(std::span(cfgs.data(), 1), grid);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].libor_pct == 1.82);
    CHECK(t.rows[0].bank_rate_pct == doctest::Approx(2.07));
}

TEST_CASE("default sweep: six monotone curves, sorted unique keys") {
    const auto cfgs = six_curves();
    const auto grid = default_rate_grid();
    auto t = run_sweep(cfgs, grid);
    REQUIRE(t.rows.size() == 6 * 29);
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        const auto& a = t.rows[i - 1];
        const auto& b = t.rows[i];
        CHECK(std::tie(a.portfolio_label, a.moc, a.libor_pct) < std::tie(b.portfolio_label, b.moc, b.libor_pct));
        if (a.portfolio_label == b.portfolio_label && a.moc == b.moc) {
            CHECK(b.bank_multiple <= a.bank_multiple);
            CHECK(b.underwriter_return <= a.underwriter_return);
        }
    }
    for (const auto& r : t.rows) CHECK(r.survived == (r.bank_multiple >= 1.0));
}

TEST_CASE("parallel sweep matches the serial reference exactly") {
    const auto cfgs = six_curves();
    const auto grid = parse_rate_grid("0:10:0.1");
    const auto par = run_sweep(cfgs, grid);
    const auto ser = run_sweep_serial(cfgs, grid);
    CHECK(par.rows == ser.rows);
}

TEST_CASE("sweep input errors") {
    const auto cfgs = six_curves();
    const double descending[] = {2.0, 1.0};
    CHECK_THROWS_AS(run_sweep(cfgs, descending), DomainError);
    CHECK_THROWS_AS(run_sweep(cfgs, std::span<const double>{}), DomainError);
    const double too_high[] = {51.0};
    CHECK_THROWS_AS(run_sweep(cfgs, too_high), DomainError);

    auto dup = cfgs;
    dup.push_back(cfgs.front());
    const double grid[] = {1.0};
    CHECK_THROWS_AS(run_sweep(dup, grid), DomainError);

    auto broken = std::vector<ScenarioConfig>{cfgs.front()};
    broken[0].horizon_years = 7;
    try {
        run_sweep(broken, grid);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("p1.10 @ 30X, LIBOR 1%") != std::string::npos);
    }
}

TEST_CASE("sweep CSV round trip is value-identical") {
    const auto cfgs = six_curves();
    auto t = run_sweep(cfgs, default_rate_grid());
    std::stringstream ss;
    write_sweep_csv(ss, t);
    const auto back = read_sweep_csv(ss);
    CHECK(back.rows == t.rows);

    std::stringstream again;
    write_sweep_csv(again, back);
    std::stringstream first;
    write_sweep_csv(first, t);
    CHECK(again.str() == first.str());

    std::istringstream bad("nope\n");
    CHECK_THROWS_AS(read_sweep_csv(bad), LoadError);
}

TEST_CASE("reports: FIG3 and FIG4") {
    const auto cfgs = six_curves();
    auto t = run_sweep(cfgs, default_rate_grid());
    const auto fig3 = render_svg(t, ReportKind::Fig3);
    CHECK(count(fig3, "<polyline") == 6);
    CHECK(count(fig3, "class=\"reference\"") == 1);
    CHECK(fig3.find("data-y=\"1\"") != std::string::npos);

    const auto fig4 = render_svg(t, ReportKind::Fig4);
    CHECK(count(fig4, "class=\"reference\"") == 1);
    CHECK(fig4.find("data-y=\"0\"") != std::string::npos);
    CHECK(count(fig4, "<polyline") == 3);

    const auto dir = std::filesystem::temp_directory_path() / "vbank_report_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    emit_report(t, ReportKind::Fig3, dir / "fig3.svg");
    CHECK(std::filesystem::exists(dir / "fig3.svg"));
    CHECK(std::filesystem::exists(dir / "fig3.csv"));

    CHECK_THROWS_AS(emit_report(SweepTable{}, ReportKind::Fig3, dir / "empty.svg"), DomainError);
    CHECK_FALSE(std::filesystem::exists(dir / "empty.svg"));
    CHECK_THROWS_AS(emit_report(t, ReportKind::Fig4, dir / "missing" / "fig4.svg"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("calibration enumerates every mode and picks the smallest score") {
    const double targets[] = {1.31};
    const auto p = reproduction_portfolios(KauffmanConstraints{}, 42, targets, true).front();
    const auto r = calibrate(p, DinTerms{});
    REQUIRE(r.outcomes.size() == 6);
    for (const auto& o : r.outcomes) {
        CHECK(o.score >= r.winner().score);
        CHECK(o.uplift == doctest::Approx(o.multiple_low_working - o.multiple_low));
    }
    CHECK(r.outcomes[1].bank_rate == doctest::Approx(0.0225));
    CHECK(r.outcomes[0].bank_rate == doctest::Approx(0.02));
    std::ostringstream out;
    write_calibration_report(out, r);
    CHECK(out.str().find("best_premium_base=") != std::string::npos);
    CHECK(count(out.str(), "\n") == 1 + 1 + 6 + 2);
}

TEST_CASE("key=value files") {
    std::istringstream in("# comment\nseed = 42\n\nmocs=30,43\nseed=7\n");
    auto kv = KeyValueFile::parse(in);
    CHECK(kv.get("seed") == "7");
    CHECK(parse_double_list(*kv.get("mocs")) == std::vector<double>{30, 43});
    CHECK(kv.unknown_keys({"seed"}) == std::vector<std::string>{"mocs"});
    std::istringstream bad("novalue\n");
    CHECK_THROWS_AS(KeyValueFile::parse(bad), ConfigError);
    CHECK(digest_hex("abc") == digest_hex("abc"));
    CHECK(digest_hex("abc") != digest_hex("abd"));
    CHECK(format_double(0.1) == "0.1");
    CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

}
