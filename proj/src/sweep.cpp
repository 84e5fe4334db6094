#include "vbank/sweep.hpp"

#include "vbank/config.hpp"
#include "vbank/din.hpp"
#include "vbank/errors.hpp"
#include "vbank/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <optional>
#include <tuple>
#include <ostream>

namespace vbank {
namespace {

constexpr std::string_view kSweepHeader =
    "portfolio,moc,libor_pct,bank_rate_pct,bank_multiple,underwriter_return,survived";

void check_inputs(std::span<const ScenarioConfig> configs, std::span<const double> grid) {
    if (grid.empty()) throw DomainError("rate grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 50.0)) throw DomainError("grid rate outside [0, 50]");
        if (i > 0 && !(grid[i - 1] < grid[i])) throw DomainError("rate grid must be strictly ascending");
    }
    for (std::size_t i = 0; i < configs.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (configs[i].portfolio.label() == configs[j].portfolio.label() &&
                configs[i].moc == configs[j].moc)
                throw DomainError("duplicate sweep key " + configs[i].portfolio.label() + " @ " +
                                  format_double(configs[i].moc) + "X");
}

SweepRow evaluate(const ScenarioConfig& base, double libor_pct) {
    ScenarioConfig cfg = base;
    SweepRow row;
    row.libor_pct = libor_pct;
    row.bank_rate_pct = funds_rate(libor_pct);
    cfg.bank_rate = row.bank_rate_pct / 100.0;
    row.portfolio_label = cfg.portfolio.label();
    row.moc = cfg.moc;
    const auto bank = simulate_bank(cfg);
    row.bank_multiple = bank.final_multiple;
    row.survived = bank.survived;
    const double principal = cfg.moc * cfg.original_capital / static_cast<double>(cfg.portfolio.size());
    row.underwriter_return =
        underwriter_ledger(cfg.portfolio, cfg.din_terms, cfg.bank_rate, principal).gross_return;
    return row;
}

std::string describe(const ScenarioConfig& cfg, double rate) {
    return cfg.portfolio.label() + " @ " + format_double(cfg.moc) + "X, LIBOR " + format_double(rate) + "%";
}

void sort_rows(std::vector<SweepRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.portfolio_label, a.moc, a.libor_pct) <
               std::tie(b.portfolio_label, b.moc, b.libor_pct);
    });
}

}  // namespace

SweepTable run_sweep(std::span<const ScenarioConfig> configs, std::span<const double> libor_grid_pct) {
    check_inputs(configs, libor_grid_pct);
    const long rates = static_cast<long>(libor_grid_pct.size());
    const long total = static_cast<long>(configs.size()) * rates;

    std::vector<SweepRow> rows(static_cast<std::size_t>(total));
    std::vector<std::optional<std::string>> errors(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < total; ++k) {
        const auto& cfg = configs[static_cast<std::size_t>(k / rates)];
        const double rate = libor_grid_pct[static_cast<std::size_t>(k % rates)];
        try {
            rows[static_cast<std::size_t>(k)] = evaluate(cfg, rate);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(k)] = describe(cfg, rate) + ": " + e.what();
        }
    }

    for (const auto& e : errors)
        if (e) throw Error("sweep failed at " + *e);

    SweepTable t;
    t.rows = std::move(rows);
    sort_rows(t.rows);
    return t;
}

SweepTable run_sweep_serial(std::span<const ScenarioConfig> configs,
                            std::span<const double> libor_grid_pct) {
    check_inputs(configs, libor_grid_pct);
    SweepTable t;
    for (const auto& cfg : configs)
        for (double rate : libor_grid_pct) {
            try {
                t.rows.push_back(evaluate(cfg, rate));
            } catch (const std::exception& e) {
                throw Error("sweep failed at " + describe(cfg, rate) + ": " + e.what());
            }
        }
    sort_rows(t.rows);
    return t;
}

std::vector<double> parse_rate_grid(std::string_view text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) {
        // a single value or a comma list
        auto values = parse_double_list(text, "rate grid");
        return values;
    }
    const double lo = parse_double(text.substr(0, c1), "grid low");
    const double hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "grid high");
    const double step = parse_double(text.substr(c2 + 1), "grid step");
    if (!(step > 0.0) || !(lo <= hi)) throw ConfigError("rate grid needs lo <= hi and step > 0");

    constexpr double kSnap = 1e-9;
    std::vector<double> grid;
    for (long i = 0;; ++i) {
        double v = lo + static_cast<double>(i) * step;
        v = std::round(v / kSnap) * kSnap;
        if (v > hi + kSnap) break;
        grid.push_back(std::min(v, hi));
        if (grid.size() > 100000) throw ConfigError("rate grid too large");
    }
    if (grid.back() < hi - kSnap) grid.push_back(hi);
    return grid;
}

std::vector<double> default_rate_grid() { return parse_rate_grid("0.53:7.50:0.25"); }

void write_sweep_csv(std::ostream& out, const SweepTable& t) {
    out << kSweepHeader << '\n';
    for (const auto& r : t.rows)
        out << r.portfolio_label << ',' << format_double(r.moc) << ',' << format_double(r.libor_pct) << ','
            << format_double(r.bank_rate_pct) << ',' << format_double(r.bank_multiple) << ','
            << format_double(r.underwriter_return) << ',' << (r.survived ? 1 : 0) << '\n';
}

SweepTable read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSweepHeader) throw LoadError("unexpected sweep header", 1);
    SweepTable t;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::string_view s = line;
        for (auto pos = s.find(','); pos != std::string_view::npos; pos = s.find(',')) {
            f.push_back(s.substr(0, pos));
            s.remove_prefix(pos + 1);
        }
        f.push_back(s);
        if (f.size() != 7) throw LoadError("expected 7 fields", line_no);
        try {
            SweepRow r;
            r.portfolio_label = std::string(f[0]);
            r.moc = parse_double(f[1]);
            r.libor_pct = parse_double(f[2]);
            r.bank_rate_pct = parse_double(f[3]);
            r.bank_multiple = parse_double(f[4]);
            r.underwriter_return = parse_double(f[5]);
            if (f[6] != "0" && f[6] != "1") throw ConfigError("survived must be 0 or 1");
            r.survived = f[6] == "1";
            t.rows.push_back(std::move(r));
        } catch (const ConfigError& e) {
            throw LoadError(e.what(), line_no);
        }
    }
    return t;
}

void write_provenance(std::ostream& out, const Provenance& p) {
    out << "config_digest=" << p.config_digest << '\n'
        << "seed=" << p.seed << '\n'
        << "timestamp=" << p.timestamp << '\n';
}

std::string portfolio_label_for(double target) { return "p" + format_fixed(target, 2); }

std::vector<ReturnPortfolio> reproduction_portfolios(const KauffmanConstraints& c, std::uint64_t seed,
                                                     std::span<const double> targets, bool compress) {
    auto base = synthesize_kauffman(c, seed).portfolio;
    if (compress) base = compress_pairs(base);
    std::vector<ReturnPortfolio> out;
    for (double target : targets) {
        auto p = shift_to_mean(base, target);
        p.set_label(portfolio_label_for(target));
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<ScenarioConfig> scenario_grid(const ScenarioConfig& base,
                                          std::span<const ReturnPortfolio> portfolios,
                                          std::span<const double> mocs) {
    std::vector<ScenarioConfig> out;
    for (const auto& p : portfolios)
        for (double moc : mocs) {
            ScenarioConfig cfg = base;
            cfg.portfolio = p;
            cfg.moc = moc;
            out.push_back(std::move(cfg));
        }
    return out;
}

}  // namespace vbank
