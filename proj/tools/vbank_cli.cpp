// vbank: command-line front end for the venture-bank double-coverage model.

#include "vbank/bank_engine.hpp"
#include "vbank/calibration.hpp"
#include "vbank/config.hpp"
#include "vbank/din.hpp"
#include "vbank/errors.hpp"
#include "vbank/market_data.hpp"
#include "vbank/portfolio.hpp"
#include "vbank/report.hpp"
#include "vbank/sweep.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace fs = std::filesystem;
using namespace vbank;

namespace {

// Every setting a config file may carry, with its default. Rates given in
// percent are marked _pct.
const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> d = {
        {"seed", "42"},
        {"compress", "true"},
        {"premium_base", "principal_upfront"},
        {"payout_basis", "shortfall_capped"},
        {"coverage", "0.0388"},
        {"premium_rate", "0.05"},
        {"surplus_rate", "0"},
        {"capital", "1"},
        {"grid", "0.53:7.50:0.25"},
        {"mocs", "30,43"},
        {"targets", "1.10,1.31,1.50"},
        {"moc", "30"},
        {"target", "1.31"},
        {"bank_rate_pct", "1.82"},
        {"lo_pct", "0.5"},
        {"hi_pct", "7.5"},
        {"portfolio", ""},
        {"out", ""},
        {"out_dir", "."},
        {"libor_file", ""},
    };
    return d;
}

// Flags registered on one subcommand; resolved against defaults and an
// optional config file after parsing.
class Settings {
public:
    explicit Settings(CLI::App* app) : app_(app) {
        app_->add_option("--config", config_path_, "key=value settings file; flags override it");
    }

    Settings& flag(const std::string& key, const std::string& name, const std::string& help) {
        options_[key] = app_->add_option(name, raw_[key], help);
        return *this;
    }

    void resolve() {
        kv_ = KeyValueFile(defaults());
        if (!config_path_.empty()) {
            const auto file = KeyValueFile::load(config_path_);
            std::vector<std::string_view> known;
            for (const auto& [k, v] : defaults()) known.push_back(k);
            const auto unknown = file.unknown_keys(known);
            if (!unknown.empty()) throw ConfigError("unknown key '" + unknown.front() + "' in " + config_path_);
            for (const auto& [k, v] : file.entries()) kv_.set(k, v);
        }
        for (const auto& [k, opt] : options_)
            if (opt->count() > 0) kv_.set(k, raw_[k]);
    }

    std::string str(const std::string& key) const { return kv_.get_or(key, ""); }
    double num(const std::string& key) const { return parse_double(str(key), key); }
    std::vector<double> list(const std::string& key) const { return parse_double_list(str(key), key); }
    std::uint64_t seed() const {
        const long s = parse_long(str("seed"), "seed");
        if (s < 0) throw ConfigError("seed must be non-negative");
        return static_cast<std::uint64_t>(s);
    }
    bool boolean(const std::string& key) const {
        const auto v = str(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError(key + ": expected true or false, got '" + v + "'");
    }

    // Canonical text of the resolved settings, minus output locations.
    std::string canonical() const {
        std::ostringstream out;
        for (const auto& [k, v] : kv_.entries())
            if (k != "out" && k != "out_dir") out << k << '=' << v << '\n';
        return out.str();
    }

private:
    CLI::App* app_;
    std::string config_path_;
    std::map<std::string, std::string> raw_;
    std::map<std::string, CLI::Option*> options_;
    KeyValueFile kv_;
};

fs::path data_dir() {
    if (const char* env = std::getenv("VBANK_DATA_DIR"); env && *env) return env;
    return VBANK_DEFAULT_DATA_DIR;
}

fs::path libor_path(const Settings& s) {
    const auto explicit_path = s.str("libor_file");
    if (!explicit_path.empty()) return explicit_path;
    return data_dir() / "USD12MD156N_monthly.csv";
}

DinTerms terms_from(const Settings& s) {
    DinTerms t;
    t.coverage_fraction = s.num("coverage");
    t.premium_rate = s.num("premium_rate");
    t.premium_base = parse_premium_base(s.str("premium_base"));
    t.payout_basis = parse_payout_basis(s.str("payout_basis"));
    t.validate();
    return t;
}

// The portfolio file when given, otherwise the synthesized one shifted to `target`.
ReturnPortfolio portfolio_from(const Settings& s) {
    const auto path = s.str("portfolio");
    if (!path.empty()) return read_portfolio_csv(path);
    const double targets[] = {s.num("target")};
    return reproduction_portfolios(KauffmanConstraints{}, s.seed(), targets, s.boolean("compress")).front();
}

ScenarioConfig scenario_from(const Settings& s) {
    ScenarioConfig cfg;
    cfg.original_capital = s.num("capital");
    cfg.moc = s.num("moc");
    cfg.portfolio = portfolio_from(s);
    cfg.din_terms = terms_from(s);
    cfg.horizon_years = cfg.din_terms.term_years;
    cfg.surplus_rate = s.num("surplus_rate");
    cfg.bank_rate = s.num("bank_rate_pct") / 100.0;
    return cfg;
}

std::string pct(double fraction) { return format_fixed(fraction * 100.0, 2); }

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void ensure_parent(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

std::ofstream open_out(const fs::path& path) {
    ensure_parent(path);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

int cmd_ingest(const Settings& s) {
    const auto series = load_libor_csv(libor_path(s));
    std::cout << "observations " << series.size() << " from " << series.first_date().iso() << " to "
              << series.last_date().iso() << '\n';
    std::cout << "window,median_pct,mean_pct,min_pct,max_pct,count\n";
    for (auto [a, b] : {std::pair{1986, 2016}, std::pair{1996, 2016}, std::pair{2006, 2016}}) {
        const auto w = window_stats(series, a, b);
        std::cout << a << '-' << b << ',' << format_fixed(w.median, 3) << ',' << format_fixed(w.mean, 3) << ','
                  << format_fixed(w.min, 2) << ',' << format_fixed(w.max, 2) << ',' << w.count << '\n';
    }
    return 0;
}

int cmd_synth(const Settings& s) {
    const KauffmanConstraints c;
    const auto r = synthesize_kauffman(c, s.seed());
    const fs::path out = s.str("out").empty() ? fs::path("kauffman.csv") : fs::path(s.str("out"));
    ensure_parent(out);
    write_portfolio_csv(out, r.portfolio, synthesis_metadata(r, c));
    const auto st = portfolio_stats(r.portfolio);
    std::cout << "wrote " << out.string() << ": " << r.portfolio.size() << " funds, mean "
              << format_fixed(st.mean, 4) << ", stddev " << format_fixed(st.stddev, 4) << ", buckets "
              << r.losers << '/' << r.moderate_winners << '/' << r.large_winners << '\n';
    return 0;
}

int cmd_coverage(const Settings& s) {
    const auto path = s.str("portfolio");
    if (path.empty()) throw ConfigError("coverage needs --portfolio");
    const auto p = read_portfolio_csv(path);
    const double floor_pct = DinTerms{}.coverage_floor * 100.0;
    for (const auto& a : {coverage_sigma_method(p, floor_pct), coverage_breakeven_method(p, floor_pct)})
        std::cout << to_string(a.method) << ": clamp loss " << format_fixed(a.clamp_loss, 2)
                  << "%, coverage " << format_fixed(a.recommended_coverage, 2) << "%\n";
    return 0;
}

int cmd_simulate(const Settings& s) {
    const auto cfg = scenario_from(s);
    const auto r = simulate_bank(cfg);
    std::ostringstream csv;
    csv << "year,interest_accrued,premiums_paid,din_receipts,exit_proceeds,surplus_interest,"
           "debt_balance_end,cash_surplus_end,equity_estimate,book_equity\n";
    for (const auto& y : r.ledger)
        csv << y.year << ',' << format_double(y.interest_accrued) << ',' << format_double(y.premiums_paid) << ','
            << format_double(y.din_receipts) << ',' << format_double(y.exit_proceeds) << ','
            << format_double(y.surplus_interest) << ',' << format_double(y.debt_balance_end) << ','
            << format_double(y.cash_surplus_end) << ',' << format_double(y.equity_estimate) << ','
            << format_double(y.book_equity) << '\n';
    if (s.str("out").empty()) {
        std::cout << csv.str();
    } else {
        open_out(s.str("out")) << csv.str();
    }
    std::cerr << cfg.portfolio.label() << " @ " << format_double(cfg.moc) << "X, bank rate "
              << pct(cfg.bank_rate) << "%: final multiple " << format_fixed(r.final_multiple, 4)
              << (r.survived ? " (survives)" : " (underwater)") << '\n';
    return 0;
}

int cmd_breakeven(const Settings& s) {
    const auto cfg = scenario_from(s);
    const double lo = s.num("lo_pct") / 100.0;
    const double hi = s.num("hi_pct") / 100.0;
    const auto rate = break_even_rate(cfg, lo, hi);
    std::cout << cfg.portfolio.label() << " @ " << format_double(cfg.moc) << "X: ";
    if (!rate) {
        std::cout << "no break-even in [" << pct(lo) << "%, " << pct(hi) << "%]\n";
        return 0;
    }
    std::cout << "break-even bank rate " << format_fixed(*rate * 100.0, 4) << "% (LIBOR "
              << format_fixed(*rate * 100.0 - kFundsSpreadPct, 4) << "%)\n";
    return 0;
}

int cmd_sweep(const Settings& s) {
    ScenarioConfig base;
    base.original_capital = s.num("capital");
    base.din_terms = terms_from(s);
    base.horizon_years = base.din_terms.term_years;
    base.surplus_rate = s.num("surplus_rate");

    const auto targets = s.list("targets");
    const auto mocs = s.list("mocs");
    const auto grid = parse_rate_grid(s.str("grid"));
    const auto portfolios = reproduction_portfolios(KauffmanConstraints{}, s.seed(), targets, s.boolean("compress"));
    const auto configs = scenario_grid(base, portfolios, mocs);

    auto table = run_sweep(configs, grid);
    table.provenance = {digest_hex(s.canonical()), s.seed(), utc_now()};

    const fs::path dir = s.str("out_dir");
    fs::create_directories(dir);
    {
        auto out = open_out(dir / "sweep.csv");
        write_sweep_csv(out, table);
    }
    {
        auto out = open_out(dir / "sweep.provenance.txt");
        write_provenance(out, table.provenance);
    }
    emit_report(table, ReportKind::Fig3, dir / "fig3.svg");
    emit_report(table, ReportKind::Fig4, dir / "fig4.svg");
    std::cout << "wrote " << table.rows.size() << " rows to " << (dir / "sweep.csv").string()
              << " with fig3.svg and fig4.svg\n";
    return 0;
}

int cmd_calibrate(const Settings& s) {
    const auto report = calibrate(portfolio_from(s), terms_from(s));
    const fs::path dir = s.str("out_dir");
    fs::create_directories(dir);
    const fs::path out = s.str("out").empty() ? dir / "calibration.txt" : fs::path(s.str("out"));
    {
        auto file = open_out(out);
        write_calibration_report(file, report);
    }
    const auto& w = report.winner();
    std::cout << "best mode " << to_string(w.mode.premium_base) << '/' << to_string(w.mode.rate_reading)
              << ": M" << format_double(report.anchors.moc_low) << ' ' << format_fixed(w.multiple_low, 3) << ", M"
              << format_double(report.anchors.moc_high) << ' ' << format_fixed(w.multiple_high, 3)
              << ", uplift " << format_fixed(w.uplift, 3) << "; wrote " << out.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Venture bank sensitivity to LIBOR-funded double coverage"};
    app.require_subcommand(1);

    // Options bind to Settings members, so each Command stays put on the heap.
    struct Command {
        Command(CLI::App* a, int (*r)(const Settings&)) : app(a), settings(a), run(r) {}
        CLI::App* app;
        Settings settings;
        int (*run)(const Settings&);
    };
    std::vector<std::unique_ptr<Command>> commands;
    auto add = [&](const char* name, const char* help, int (*run)(const Settings&)) -> Settings& {
        auto* sub = app.add_subcommand(name, help);
        commands.push_back(std::make_unique<Command>(sub, run));
        return commands.back()->settings;
    };

    add("ingest", "load the LIBOR snapshot and print window statistics", cmd_ingest)
        .flag("libor_file", "--file", "LIBOR CSV (default: bundled snapshot)");
    add("synth", "synthesize the 99-fund Kauffman portfolio", cmd_synth)
        .flag("seed", "--seed", "RNG seed")
        .flag("out", "--out", "portfolio CSV to write");
    add("coverage", "DIN coverage from both clamp methods", cmd_coverage)
        .flag("portfolio", "--portfolio", "portfolio CSV");

    auto scenario_flags = [](Settings& s) -> Settings& {
        return s.flag("seed", "--seed", "RNG seed")
            .flag("portfolio", "--portfolio", "portfolio CSV (default: synthesized, shifted to --target)")
            .flag("target", "--target", "portfolio mean return")
            .flag("moc", "--moc", "multiple of original capital")
            .flag("coverage", "--coverage", "DIN coverage fraction")
            .flag("premium_rate", "--premium-rate", "DIN premium rate")
            .flag("premium_base", "--premium-base", "face_annual | principal_annual | principal_upfront")
            .flag("payout_basis", "--payout-basis", "shortfall_capped | full_face")
            .flag("surplus_rate", "--surplus-rate", "rate earned on cash surplus")
            .flag("capital", "--capital", "original capital");
    };
    scenario_flags(add("simulate", "run one scenario and print its ledger", cmd_simulate))
        .flag("bank_rate_pct", "--bank-rate", "bank borrowing rate, percent")
        .flag("out", "--out", "ledger CSV (default: stdout)");
    scenario_flags(add("breakeven", "solve for the break-even bank rate", cmd_breakeven))
        .flag("lo_pct", "--lo", "bracket low, percent")
        .flag("hi_pct", "--hi", "bracket high, percent");
    scenario_flags(add("sweep", "sweep LIBOR across portfolios and MOCs", cmd_sweep))
        .flag("grid", "--grid", "LIBOR grid lo:hi:step in percent")
        .flag("mocs", "--mocs", "comma-separated MOCs")
        .flag("targets", "--targets", "comma-separated portfolio means")
        .flag("out_dir", "--out-dir", "output directory");
    scenario_flags(add("calibrate", "score premium bases and rate readings against the anchors", cmd_calibrate))
        .flag("out_dir", "--out-dir", "output directory")
        .flag("out", "--out", "report path (default: <out-dir>/calibration.txt)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        for (auto& c : commands) {
            if (!c->app->parsed()) continue;
            c->settings.resolve();
            return c->run(c->settings);
        }
    } catch (const std::exception& e) {
        std::cerr << "vbank: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
