#include "kapitza/timeseries.hpp"

#include <stdexcept>

namespace kapitza {

bool TimeSeries::has(std::string_view name) const {
    for (const auto& [key, _] : columns)
        if (key == name) return true;
    return false;
}

const std::vector<double>& TimeSeries::column(std::string_view name) const {
    for (const auto& [key, values] : columns)
        if (key == name) return values;
    throw std::out_of_range("no column '" + std::string(name) + "'");
}

std::vector<double>& TimeSeries::column(std::string_view name) {
    for (auto& [key, values] : columns)
        if (key == name) return values;
    throw std::out_of_range("no column '" + std::string(name) + "'");
}

std::vector<double>& TimeSeries::add_column(std::string name) {
    for (auto& [key, values] : columns)
        if (key == name) return values;
    columns.emplace_back(std::move(name), std::vector<double>{});
    return columns.back().second;
}

void TimeSeries::validate() const {
    for (const auto& [key, values] : columns)
        if (values.size() != times.size())
            throw std::logic_error("column '" + key + "' has " + std::to_string(values.size()) +
                                   " samples, expected " + std::to_string(times.size()));
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw std::logic_error("sample times not increasing");
}

}  // namespace kapitza
