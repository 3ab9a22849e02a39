#pragma once

#include <string>
#include <vector>

#include "vvjump/mcmc.hpp"

namespace vvjump {

// Calendar date, kept as plain fields; only ordering and formatting are needed.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    long serial() const; // days since civil epoch, for ordering and offsets
    std::string iso() const;
    static Date parse(const std::string& text); // strict YYYY-MM-DD
    Date plus_days(int n) const;
};

// Aligned daily VIX/VVIX observations with the derived model inputs:
// y = ln(vix in index points), vvix_sq = (vvix/100)^2.
struct ObservedSeries {
    std::vector<Date> dates;
    std::vector<double> vix;
    std::vector<double> vvix;
    std::vector<double> y;
    std::vector<double> vvix_sq;

    std::size_t size() const { return dates.size(); }
};

// Parses a (date, vix, vvix) CSV with a header row. Malformed numbers or
// dates, missing fields, nonpositive levels and non-increasing dates are
// reported with their row number.
ObservedSeries ingest_csv(const std::string& path);
ObservedSeries parse_observations(std::istream& is, const std::string& origin);

// Estimation layout from N aligned observations: T = N - 2, logVIX on days
// 0..T+1 and decimal squared VVIX on days 1..T.
EstimationData estimation_data_from_series(const ObservedSeries& series);

} // namespace vvjump
