#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace kapitza {

/// Column order of exported series.
inline const std::vector<std::string>& standard_columns() {
    static const std::vector<std::string> cols{"t",       "p_m1_up", "p_m1_dn", "p_p1_up", "p_p1_dn",
                                               "s_total", "s_m1",    "s_p1",    "norm"};
    return cols;
}

/// Sampled observables versus time. Columns keep insertion order.
struct TimeSeries {
    std::vector<double> times;
    std::vector<std::pair<std::string, std::vector<double>>> columns;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    std::size_t size() const { return times.size(); }
    bool has(std::string_view name) const;
    const std::vector<double>& column(std::string_view name) const;
    std::vector<double>& column(std::string_view name);
    /// Appends an empty column or returns the existing one.
    std::vector<double>& add_column(std::string name);

    /// Throws std::logic_error on unequal lengths or non-increasing times.
    void validate() const;
};

}  // namespace kapitza
