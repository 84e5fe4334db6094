#include "vbank/market_data.hpp"

#include "vbank/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>

namespace vbank {
namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

Date Date::parse(std::string_view text) {
    text = trim(text);
    Date d;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !parse_int(text.substr(0, 4), d.year) || !parse_int(text.substr(5, 2), d.month) ||
        !parse_int(text.substr(8, 2), d.day) || !d.valid()) {
        throw DomainError("invalid date '" + std::string(text) + "'");
    }
    return d;
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

bool Date::valid() const {
    return month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

LiborSeries::LiborSeries(std::vector<RateObservation> observations)
    : observations_(std::move(observations)) {
    if (observations_.empty()) throw EmptySeriesError("rate series has no observations");
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        const auto& o = observations_[i];
        if (!(o.rate >= 0.0 && o.rate <= 50.0))
            throw DomainError("rate " + std::to_string(o.rate) + " on " + o.date.iso() +
                              " outside [0, 50]");
        if (i > 0 && !(observations_[i - 1].date < o.date))
            throw DomainError("dates not strictly increasing at " + o.date.iso());
    }
}

LiborSeries parse_libor_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw LoadError("missing header", 1);
    ++line_no;
    {
        auto header = trim(line);
        auto comma = header.find(',');
        if (comma == std::string_view::npos || trim(header.substr(0, comma)).empty() ||
            trim(header.substr(comma + 1)).empty() ||
            header.find(',', comma + 1) != std::string_view::npos) {
            throw LoadError("header must name a date column and one value column", line_no);
        }
    }

    std::vector<RateObservation> rows;
    while (std::getline(in, line)) {
        ++line_no;
        auto row = trim(line);
        if (row.empty()) continue;
        auto comma = row.find(',');
        if (comma == std::string_view::npos) throw LoadError("expected two fields", line_no);

        Date date;
        try {
            date = Date::parse(row.substr(0, comma));
        } catch (const DomainError& e) {
            throw LoadError(e.what(), line_no);
        }

        auto value = trim(row.substr(comma + 1));
        if (value == kMissingMarker) continue;
        double rate = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), rate);
        if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size() ||
            !std::isfinite(rate)) {
            throw LoadError("non-numeric value '" + std::string(value) + "'", line_no);
        }
        if (!rows.empty() && !(rows.back().date < date))
            throw LoadError("dates not strictly increasing", line_no);
        if (rate < 0.0 || rate > 50.0) throw LoadError("rate outside [0, 50]", line_no);
        rows.push_back({date, rate});
    }
    if (rows.empty()) throw EmptySeriesError("no usable rows in rate series");
    return LiborSeries(std::move(rows));
}

LiborSeries load_libor_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_libor_csv(in);
}

WindowStats window_stats(const LiborSeries& series, Date start, Date end) {
    if (end < start) throw DomainError("window end precedes start");
    std::vector<double> rates;
    for (const auto& o : series.observations()) {
        if (o.date < start || end < o.date) continue;
        rates.push_back(o.rate);
    }
    if (rates.empty())
        throw EmptyWindowError("no observations between " + start.iso() + " and " + end.iso());

    WindowStats s;
    s.count = rates.size();
    s.mean = std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(s.count);
    std::sort(rates.begin(), rates.end());
    s.min = rates.front();
    s.max = rates.back();
    const std::size_t mid = s.count / 2;
    s.median = s.count % 2 ? rates[mid] : 0.5 * (rates[mid - 1] + rates[mid]);
    return s;
}

WindowStats window_stats(const LiborSeries& series, int first_year, int last_year) {
    return window_stats(series, Date::first_of_year(first_year), Date::last_of_year(last_year));
}

double funds_rate(double libor_pct) {
    if (!(libor_pct >= 0.0)) throw DomainError("LIBOR must be non-negative");
    return libor_pct + kFundsSpreadPct;
}

}  // namespace vbank
