#pragma once

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vbank {

/// Calendar date, proleptic Gregorian.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    friend constexpr auto operator<=>(const Date&, const Date&) = default;

    /// Parses `YYYY-MM-DD`; throws DomainError on anything else.
    static Date parse(std::string_view text);
    std::string iso() const;
    bool valid() const;

    static constexpr Date first_of_year(int y) { return {y, 1, 1}; }
    static constexpr Date last_of_year(int y) { return {y, 12, 31}; }
    static constexpr Date min() { return {-9999, 1, 1}; }
    static constexpr Date max() { return {9999, 12, 31}; }
};

/// One observation of the 12-month interbank rate, in percent (0-100 scale).
struct RateObservation {
    Date date;
    double rate = 0.0;
};

/// Ordered, non-empty series of rate observations with strictly increasing dates.
class LiborSeries {
public:
    explicit LiborSeries(std::vector<RateObservation> observations);

    std::span<const RateObservation> observations() const { return observations_; }
    std::size_t size() const { return observations_.size(); }
    const Date& first_date() const { return observations_.front().date; }
    const Date& last_date() const { return observations_.back().date; }

private:
    std::vector<RateObservation> observations_;
};

/// FRED export convention for a missing value.
inline constexpr std::string_view kMissingMarker = ".";

/// Reads a FRED-format CSV (`DATE,<SERIES_ID>` header). Rows holding the
/// missing marker are skipped; any other bad row is a LoadError naming its line.
LiborSeries load_libor_csv(const std::filesystem::path& path);
LiborSeries parse_libor_csv(std::istream& in);

struct WindowStats {
    double median = 0.0;
    double mean = 0.0;
    std::size_t count = 0;
    double min = 0.0;
    double max = 0.0;
};

/// Statistics over observations with start <= date <= end. Throws
/// EmptyWindowError when nothing falls inside.
WindowStats window_stats(const LiborSeries& series, Date start, Date end);

/// Calendar-year window: Jan 1 of `first_year` through Dec 31 of `last_year`.
WindowStats window_stats(const LiborSeries& series, int first_year, int last_year);

inline constexpr double kFundsSpreadPct = 0.25;

/// Bank funding rate in percent: LIBOR plus the fixed interbank spread.
double funds_rate(double libor_pct);

}  // namespace vbank
