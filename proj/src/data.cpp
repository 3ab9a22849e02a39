#include "vvjump/data.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace vvjump {

namespace {

[[noreturn]] void fail_row(const std::string& origin, std::size_t row, const std::string& what) {
    throw std::runtime_error(origin + ": row " + std::to_string(row) + ": " + what);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    out.push_back(field);
    for (std::string& f : out) {
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.pop_back();
    }
    return out;
}

double parse_number(const std::string& s, const std::string& origin, std::size_t row) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) fail_row(origin, row, "malformed number '" + s + "'");
    return v;
}

// Howard Hinnant's days-from-civil.
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, int& y, int& m, int& d) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long yr = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

} // namespace

long Date::serial() const { return days_from_civil(year, month, day); }

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse(const std::string& text) {
    Date d;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw std::runtime_error("malformed date '" + text + "'");
    const auto num = [&](int from, int len) {
        int v = 0;
        auto res = std::from_chars(text.data() + from, text.data() + from + len, v);
        if (res.ec != std::errc() || res.ptr != text.data() + from + len)
            throw std::runtime_error("malformed date '" + text + "'");
        return v;
    };
    d.year = num(0, 4);
    d.month = num(5, 2);
    d.day = num(8, 2);
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
        throw std::runtime_error("malformed date '" + text + "'");
    return d;
}

Date Date::plus_days(int n) const {
    Date out;
    civil_from_days(serial() + n, out.year, out.month, out.day);
    return out;
}

ObservedSeries parse_observations(std::istream& is, const std::string& origin) {
    ObservedSeries s;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() < 3) fail_row(origin, row, "expected header 'date,vix,vvix'");
            continue;
        }
        if (fields.size() != 3) fail_row(origin, row, "expected 3 fields, got " + std::to_string(fields.size()));
        for (const std::string& f : fields)
            if (f.empty()) fail_row(origin, row, "missing value");
        Date date;
        try {
            date = Date::parse(fields[0]);
        } catch (const std::exception& e) {
            fail_row(origin, row, e.what());
        }
        const double vix = parse_number(fields[1], origin, row);
        const double vvix = parse_number(fields[2], origin, row);
        if (!(vix > 0.0)) fail_row(origin, row, "vix must be positive");
        if (!(vvix > 0.0)) fail_row(origin, row, "vvix must be positive");
        if (!s.dates.empty() && date.serial() <= s.dates.back().serial())
            fail_row(origin, row, "dates must be strictly increasing");
        s.dates.push_back(date);
        s.vix.push_back(vix);
        s.vvix.push_back(vvix);
        s.y.push_back(std::log(vix));
        s.vvix_sq.push_back((vvix / 100.0) * (vvix / 100.0));
    }
    if (!header_seen) throw std::runtime_error(origin + ": empty input");
    return s;
}

ObservedSeries ingest_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open input file '" + path + "'");
    return parse_observations(is, path);
}

EstimationData estimation_data_from_series(const ObservedSeries& series) {
    if (series.size() < 4)
        throw std::invalid_argument("estimation needs at least 4 aligned observations");
    EstimationData d;
    d.T = static_cast<int>(series.size()) - 2;
    d.y = series.y;
    d.vvix_sq.assign(d.T + 1, 0.0);
    for (int i = 1; i <= d.T; ++i) d.vvix_sq[i] = series.vvix_sq[i];
    return d;
}

} // namespace vvjump
