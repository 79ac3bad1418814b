#include "kapitza/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kapitza/errors.hpp"

namespace kapitza::io {

namespace {

std::string format(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

void write_csv(const TimeSeries& series, const std::string& path) {
    series.validate();
    const auto& names = standard_columns();
    std::vector<const std::vector<double>*> cols;
    for (const auto& name : names) {
        if (name == "t")
            cols.push_back(&series.times);
        else
            cols.push_back(series.has(name) ? &series.column(name) : nullptr);
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open for writing");
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    out << '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (j) out << ',';
            if (cols[j]) out << format((*cols[j])[i]);
        }
        out << '\n';
    }
    if (!out) throw IoError(path, "write failed");

    // columns outside the schema travel in the sidecar
    nlohmann::ordered_json metadata = series.metadata;
    for (const auto& [name, values] : series.columns) {
        if (std::find(names.begin(), names.end(), name) != names.end()) continue;
        auto& slot = metadata["extra_columns"][name];
        slot = nlohmann::ordered_json::array();
        for (double v : values) slot.push_back(std::isnan(v) ? nlohmann::ordered_json() : nlohmann::ordered_json(v));
    }

    const std::string sidecar = path + ".json";
    std::ofstream meta(sidecar, std::ios::binary);
    if (!meta) throw IoError(sidecar, "cannot open for writing");
    meta << metadata.dump(2) << '\n';
    if (!meta) throw IoError(sidecar, "write failed");
}

TimeSeries read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    std::string line;
    if (!std::getline(in, line)) throw IoError(path, "empty file");
    const auto header = split(line);
    if (header.empty() || header.front() != "t") throw IoError(path, "first column must be t");

    std::vector<std::vector<double>> values(header.size());
    std::vector<bool> seen(header.size(), false);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != header.size())
            throw IoError(path, "row " + std::to_string(row) + " has " +
                                    std::to_string(fields.size()) + " fields");
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const std::string& f = fields[j];
            double v = std::numeric_limits<double>::quiet_NaN();
            if (!f.empty()) {
                seen[j] = true;
                if (f != "nan") {
                    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
                    if (res.ec != std::errc() || res.ptr != f.data() + f.size())
                        throw IoError(path, "row " + std::to_string(row) + ": bad number '" + f + "'");
                }
            }
            values[j].push_back(v);
        }
    }

    TimeSeries ts;
    ts.times = std::move(values[0]);
    for (std::size_t j = 1; j < header.size(); ++j)
        if (seen[j]) ts.add_column(header[j]) = std::move(values[j]);

    std::ifstream meta(path + ".json");
    if (meta) {
        try {
            ts.metadata = nlohmann::ordered_json::parse(meta);
            if (ts.metadata.contains("extra_columns")) {
                for (const auto& [name, values] : ts.metadata["extra_columns"].items()) {
                    auto& col = ts.add_column(name);
                    for (const auto& v : values)
                        col.push_back(v.is_null() ? std::nan("") : v.get<double>());
                }
                ts.metadata.erase("extra_columns");
            }
        } catch (const nlohmann::json::exception& e) {
            throw IoError(path + ".json", e.what());
        }
    }
    return ts;
}

}  // namespace kapitza::io
