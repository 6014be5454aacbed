#include "wavebench/csv.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wavebench/errors.hpp"

namespace wavebench {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t begin = 0;
    while (true) {
        const auto comma = line.find(',', begin);
        fields.push_back(trim(line.substr(begin, comma == std::string_view::npos ? line.npos : comma - begin)));
        if (comma == std::string_view::npos) {
            break;
        }
        begin = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line_no, std::string_view what) {
    T value{};
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw DomainError("line " + std::to_string(line_no) + ": cannot parse " + std::string(what) + " '" +
                          std::string(text) + "'");
    }
    return value;
}

} // namespace

TimeSeries read_series_csv(std::istream& in, std::string_view value_column) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> value_idx;
    std::optional<std::size_t> period_idx;
    std::vector<std::string> header;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) {
            view.remove_prefix(3);
        }
        if (trim(view).empty()) {
            continue;
        }
        for (auto field : split_fields(view)) {
            header.emplace_back(field);
        }
        break;
    }
    if (header.empty()) {
        throw DomainError("CSV input is empty; a header row is required");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == value_column) {
            value_idx = i;
        } else if (header[i] == "period" || header[i] == "t") {
            period_idx = i;
        }
    }
    if (!value_idx) {
        throw DomainError("CSV header has no '" + std::string(value_column) + "' column");
    }

    std::vector<double> values;
    std::optional<std::int64_t> first_period;
    std::int64_t expected_period = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw DomainError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                              " fields, found " + std::to_string(fields.size()));
        }
        values.push_back(parse_number<double>(fields[*value_idx], line_no, "value"));
        if (period_idx) {
            const auto period = parse_number<std::int64_t>(fields[*period_idx], line_no, "period");
            if (!first_period) {
                first_period = period;
            } else if (period != expected_period) {
                throw DomainError("line " + std::to_string(line_no) + ": periods must be consecutive, expected " +
                                  std::to_string(expected_period));
            }
            expected_period = period + 1;
        }
    }
    if (values.empty()) {
        throw DomainError("CSV input has a header but no observations");
    }
    return TimeSeries(std::move(values), first_period.value_or(1));
}

TimeSeries read_series_csv(const std::filesystem::path& path, std::string_view value_column) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open " + path.string());
    }
    return read_series_csv(in, value_column);
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw DomainError("cannot format value");
    }
    return std::string(buf, ptr);
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
    out << "t,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.start_index() + static_cast<std::int64_t>(i) << ',' << format_double(series[i]) << '\n';
    }
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series) {
    std::ofstream out(path);
    if (!out) {
        throw DomainError("cannot write " + path.string());
    }
    write_series_csv(out, series);
    if (!out) {
        throw DomainError("error while writing " + path.string());
    }
}

} // namespace wavebench
