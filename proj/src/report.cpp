#include "vbank/report.hpp"

#include "vbank/config.hpp"
#include "vbank/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

namespace vbank {
namespace {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (libor %, value)
    std::vector<const SweepRow*> rows;
};

std::vector<Series> collect(const SweepTable& t, ReportKind kind) {
    std::vector<Series> out;
    std::map<std::pair<std::string, double>, std::size_t> index;
    std::map<std::string, double> first_moc;
    for (const auto& r : t.rows) {
        if (kind == ReportKind::Fig4) {
            // underwriter return does not depend on leverage; one curve per portfolio
            auto [it, fresh] = first_moc.emplace(r.portfolio_label, r.moc);
            if (!fresh && it->second != r.moc) continue;
        }
        const auto key = std::make_pair(r.portfolio_label, kind == ReportKind::Fig3 ? r.moc : 0.0);
        auto [it, fresh] = index.emplace(key, out.size());
        if (fresh) {
            Series s;
            s.name = kind == ReportKind::Fig3 ? r.portfolio_label + " " + format_double(r.moc) + "X"
                                              : r.portfolio_label;
            out.push_back(std::move(s));
        }
        out[it->second].points.emplace_back(r.libor_pct,
                                            kind == ReportKind::Fig3 ? r.bank_multiple : r.underwriter_return);
        out[it->second].rows.push_back(&r);
    }
    return out;
}

// Round outward to a 1-2-5 tick step.
double nice_step(double span) {
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 5.0, 10.0})
        if (raw <= f * mag) return f * mag;
    return 10.0 * mag;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string render_svg(const SweepTable& t, ReportKind kind) {
    if (t.rows.empty()) throw DomainError("cannot render an empty sweep table");
    const auto series = collect(t, kind);
    const double reference = kind == ReportKind::Fig3 ? 1.0 : 0.0;

    double x0 = t.rows.front().libor_pct, x1 = x0, y0 = reference, y1 = reference;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) y1 = y0 + 1.0;
    const double ystep = nice_step(y1 - y0);
    y0 = std::floor(y0 / ystep) * ystep;
    y1 = std::ceil(y1 / ystep) * ystep;
    const double xstep = nice_step(x1 - x0);

    constexpr double W = 800, H = 500, L = 70, R = 170, T = 40, B = 50;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    auto num = [](double v) { return format_fixed(v, 2); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << (kind == ReportKind::Fig3 ? "Venture bank return multiple vs LIBOR (break-even 1.0)"
                                     : "DIN underwriter gross return vs LIBOR (break-even 0)")
        << "</text>\n";

    svg << "<g class=\"axes\" stroke=\"#444\">\n";
    svg << "<line x1=\"" << num(L) << "\" y1=\"" << num(H - B) << "\" x2=\"" << num(W - R) << "\" y2=\""
        << num(H - B) << "\"/>\n";
    svg << "<line x1=\"" << num(L) << "\" y1=\"" << num(T) << "\" x2=\"" << num(L) << "\" y2=\""
        << num(H - B) << "\"/>\n</g>\n";

    svg << "<g class=\"ticks\" fill=\"#444\">\n";
    for (double x = std::ceil(x0 / xstep) * xstep; x <= x1 + 1e-9; x += xstep)
        svg << "<text x=\"" << num(px(x)) << "\" y=\"" << num(H - B + 16) << "\" text-anchor=\"middle\">"
            << format_fixed(x, 2) << "</text>\n";
    for (double y = y0; y <= y1 + 1e-9; y += ystep)
        svg << "<text x=\"" << num(L - 6) << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">"
            << format_fixed(y, 2) << "</text>\n";
    svg << "<text x=\"" << num((L + W - R) / 2) << "\" y=\"" << num(H - 12)
        << "\" text-anchor=\"middle\">12-month LIBOR (%)</text>\n</g>\n";

    svg << "<line class=\"reference\" data-y=\"" << format_double(reference) << "\" x1=\"" << num(L)
        << "\" y1=\"" << num(py(reference)) << "\" x2=\"" << num(W - R) << "\" y2=\"" << num(py(reference))
        << "\" stroke=\"#000\" stroke-dasharray=\"6,4\"/>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        svg << "<polyline class=\"series\" data-name=\"" << series[i].name << "\" fill=\"none\" stroke=\""
            << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t j = 0; j < series[i].points.size(); ++j)
            svg << (j ? " " : "") << num(px(series[i].points[j].first)) << ','
                << num(py(series[i].points[j].second));
        svg << "\"/>\n";
        const double ly = T + 10 + 18.0 * static_cast<double>(i);
        svg << "<text x=\"" << num(W - R + 30) << "\" y=\"" << num(ly + 4) << "\">" << series[i].name
            << "</text>\n";
        svg << "<rect x=\"" << num(W - R + 10) << "\" y=\"" << num(ly - 2) << "\" width=\"14\" height=\"4\" fill=\""
            << color << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string render_backing_csv(const SweepTable& t, ReportKind kind) {
    if (t.rows.empty()) throw DomainError("cannot render an empty sweep table");
    std::ostringstream csv;
    if (kind == ReportKind::Fig3) {
        csv << "portfolio,moc,libor_pct,bank_rate_pct,bank_multiple\n";
        for (const auto& r : t.rows)
            csv << r.portfolio_label << ',' << format_double(r.moc) << ',' << format_double(r.libor_pct) << ','
                << format_double(r.bank_rate_pct) << ',' << format_double(r.bank_multiple) << '\n';
    } else {
        csv << "portfolio,libor_pct,bank_rate_pct,underwriter_return\n";
        for (const auto& s : collect(t, kind))
            for (const SweepRow* r : s.rows)
                csv << s.name << ',' << format_double(r->libor_pct) << ',' << format_double(r->bank_rate_pct)
                    << ',' << format_double(r->underwriter_return) << '\n';
    }
    return csv.str();
}

void emit_report(const SweepTable& t, ReportKind kind, const std::filesystem::path& out) {
    const std::string svg = render_svg(t, kind);
    const std::string csv = render_backing_csv(t, kind);
    auto csv_path = out;
    csv_path.replace_extension(".csv");

    auto write = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw IoError("cannot write " + p.string());
        f << text;
        if (!f.flush()) throw IoError("write failed for " + p.string());
    };
    write(out, svg);
    try {
        write(csv_path, csv);
    } catch (...) {
        std::filesystem::remove(out);
        throw;
    }
}

}  // namespace vbank
