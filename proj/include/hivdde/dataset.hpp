#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hivdde/params.hpp"

namespace hivdde {

/// A required column is missing from a dataset file header.
class MissingColumn : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Yearly observations: susceptible/infected totals in millions, information
/// level as a fraction of reporting organizations.
struct Dataset {
    struct Obs {
        int year;
        double value;
    };
    std::vector<Obs> susceptible;
    std::vector<Obs> infected;
    std::vector<Obs> info;
    int epoch_year = 1992;  ///< calendar year mapped to t = 0

    int last_year() const {
        int y = epoch_year;
        for (const auto* v : {&susceptible, &infected, &info})
            for (const auto& o : *v) y = std::max(y, o.year);
        return y;
    }
};

inline void validate(const Dataset& ds) {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid dataset: " + what); };
    for (const auto* v : {&ds.susceptible, &ds.infected})
        for (const auto& o : *v) {
            if (o.year < ds.epoch_year) fail("observation year precedes the epoch year");
            if (!(o.value > 0.0)) fail("population observations must be positive");
        }
    for (const auto& o : ds.info) {
        if (o.year < ds.epoch_year) fail("observation year precedes the epoch year");
        if (!(o.value > 0.0 && o.value < 1.0)) fail("information fractions must lie in (0,1)");
    }
}

/// The Uganda 1992-2005 observations (adults 15-59). Population counts are
/// stored in millions; the information column is organizations out of 1200.
inline Dataset builtin_uganda() {
    Dataset ds;
    ds.epoch_year = 1992;
    ds.susceptible = {{1999, 6.7}, {2000, 6.59747}, {2001, 7.13}, {2003, 7.462}, {2005, 7.636}};
    ds.infected = {{1999, 0.606}, {2000, 0.573693}, {2001, 0.383}, {2003, 0.544}, {2005, 0.548261}};
    ds.info = {{1997, 600.0 / 1200.0},
               {2000, 700.0 / 1200.0},
               {2001, 717.0 / 1200.0},
               {2005, 778.0 / 1200.0}};
    return ds;
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

}  // namespace detail

/// Reads `year,susceptible,infected,info_fraction` delimited text. Empty
/// fields mark missing observations. Susceptible/infected are raw person
/// counts and are converted to millions; info values are fractions as-is.
inline Dataset load_dataset(std::istream& in) {
    Dataset ds;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("dataset: empty input");
    ++lineno;
    const auto header = detail::split_csv(line);
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw MissingColumn("dataset: missing column '" + name + "'");
    };
    const std::size_t c_year = col("year");
    const std::size_t c_s = col("susceptible");
    const std::size_t c_i = col("infected");
    const std::size_t c_z = col("info_fraction");

    auto parse_num = [&lineno](const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ParseError("dataset line " + std::to_string(lineno) + ": bad number '" + s + "'");
        }
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_csv(line);
        if (f.size() <= std::max({c_year, c_s, c_i, c_z}))
            throw ParseError("dataset line " + std::to_string(lineno) + ": not enough fields");
        const int year = static_cast<int>(parse_num(f[c_year]));
        if (!f[c_s].empty()) ds.susceptible.push_back({year, parse_num(f[c_s]) / 1e6});
        if (!f[c_i].empty()) ds.infected.push_back({year, parse_num(f[c_i]) / 1e6});
        if (!f[c_z].empty()) ds.info.push_back({year, parse_num(f[c_z])});
    }
    validate(ds);
    return ds;
}

inline Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset: " + path.string());
    return load_dataset(in);
}

/// Inverse of load_dataset: one row per year, persons for populations.
inline void save_dataset(std::ostream& out, const Dataset& ds) {
    std::vector<int> years;
    for (const auto* v : {&ds.susceptible, &ds.infected, &ds.info})
        for (const auto& o : *v)
            if (std::find(years.begin(), years.end(), o.year) == years.end())
                years.push_back(o.year);
    std::sort(years.begin(), years.end());

    auto find = [](const std::vector<Dataset::Obs>& v, int year) -> std::optional<double> {
        for (const auto& o : v)
            if (o.year == year) return o.value;
        return std::nullopt;
    };
    out << "year,susceptible,infected,info_fraction\n";
    for (int y : years) {
        std::ostringstream row;
        row.precision(15);
        row << y << ',';
        if (auto v = find(ds.susceptible, y)) row << v.value() * 1e6;
        row << ',';
        if (auto v = find(ds.infected, y)) row << v.value() * 1e6;
        row << ',';
        if (auto v = find(ds.info, y)) row << v.value();
        out << row.str() << '\n';
    }
}

inline void save_dataset(const std::filesystem::path& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset: " + path.string());
    save_dataset(out, ds);
}

}  // namespace hivdde
