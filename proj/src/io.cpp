#include "distprob/io.hpp"

#include "distprob/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

namespace distprob::io {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
        --end;
    }
    return s.substr(begin, end - begin);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == delimiter) {
            cells.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return cells;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    return lines;
}

double parse_number(const std::string& cell, bool allow_nonfinite,
                    const std::string& where) {
    const std::string t = trim(cell);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw InputError("unparseable number '" + cell + "' at " + where);
    }
    if (!allow_nonfinite && !std::isfinite(value)) {
        throw InputError("non-finite value '" + cell + "' at " + where);
    }
    return value;
}

int parse_label(const std::string& cell, const std::string& where) {
    const std::string t = lower(trim(cell));
    if (t == "0" || t == "no" || t == "normal") {
        return 0;
    }
    if (t == "1" || t == "yes" || t == "outlier" || t == "anomaly") {
        return 1;
    }
    throw InputError("unrecognized label '" + cell + "' at " + where);
}

std::string cell_position(std::size_t line, std::size_t column) {
    return "row " + std::to_string(line) + ", column " + std::to_string(column);
}

std::size_t resolve_label_column(const TabularFileSpec& spec,
                                 const std::vector<std::string>& header,
                                 std::size_t width) {
    const std::string& wanted = *spec.label_column;
    if (spec.header) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (trim(header[j]) == wanted) {
                return j;
            }
        }
    }
    std::size_t index = 0;
    const std::string t = trim(wanted);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), index);
    if (ec == std::errc{} && ptr == t.data() + t.size() && index < width) {
        return index;
    }
    throw InputError("label column '" + wanted + "' not found");
}

} // namespace

core::Dataset read_dataset(const TabularFileSpec& spec) {
    const auto lines = read_lines(spec.path);
    const std::size_t first_data = spec.header ? 1 : 0;
    if (lines.size() <= first_data) {
        throw InputError("'" + spec.path + "' contains no data rows");
    }
    std::vector<std::string> header;
    if (spec.header) {
        header = split(lines[0], spec.delimiter);
    }
    const std::size_t width = split(lines[first_data], spec.delimiter).size();
    if (spec.header && header.size() != width) {
        throw InputError("'" + spec.path + "': header has " +
                         std::to_string(header.size()) + " columns, data has " +
                         std::to_string(width));
    }

    std::size_t label_col = core::DistanceMatrix::npos;
    if (spec.label_column) {
        label_col = resolve_label_column(spec, header, width);
    }
    const std::size_t d = width - (spec.label_column ? 1 : 0);
    if (d == 0) {
        throw InputError("'" + spec.path + "' has no feature columns");
    }

    const std::size_t n = lines.size() - first_data;
    std::vector<double> values;
    values.reserve(n * d);
    std::optional<std::vector<int>> labels;
    if (spec.label_column) {
        labels.emplace();
        labels->reserve(n);
    }
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t line_no = first_data + r + 1; // 1-based, header counted
        const auto cells = split(lines[first_data + r], spec.delimiter);
        if (cells.size() != width) {
            throw InputError("'" + spec.path + "': row " + std::to_string(line_no) +
                             " has " + std::to_string(cells.size()) +
                             " columns, expected " + std::to_string(width));
        }
        for (std::size_t c = 0; c < width; ++c) {
            const std::string where = cell_position(line_no, c + 1);
            if (c == label_col) {
                labels->push_back(parse_label(cells[c], where));
            } else {
                values.push_back(parse_number(cells[c], false, where));
            }
        }
    }
    return core::Dataset(n, d, std::move(values), std::move(labels));
}

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InputError("cannot write '" + temp + "'");
        }
        out << content;
        if (!out.flush()) {
            throw InputError("failed writing '" + temp + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) {
        throw InputError("cannot rename '" + temp + "' to '" + path + "': " + ec.message());
    }
}

void write_scores(const std::string& path, std::span<const std::string> ids,
                  const detectors::ScoreVector& raw,
                  const detectors::ScoreVector* probabilities) {
    if (ids.size() != raw.scores.size() ||
        (probabilities && probabilities->scores.size() != ids.size())) {
        throw InputError("write_scores: ids, scores and probabilities must have equal length");
    }
    std::ostringstream out;
    out << (probabilities ? "id,raw_score,probability\n" : "id,raw_score\n");
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << ids[i] << ',' << format_double(raw.scores[i]);
        if (probabilities) {
            out << ',' << format_double(probabilities->scores[i]);
        }
        out << '\n';
    }
    atomic_write(path, out.str());
}

ScoreFile read_scores(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) {
        throw InputError("'" + path + "' is empty");
    }
    const auto header = split(lines[0], ',');
    bool with_probability = false;
    if (header.size() == 3 && header[2] == "probability") {
        with_probability = true;
    } else if (header.size() != 2) {
        throw InputError("'" + path + "' is not a score file");
    }
    ScoreFile file;
    if (with_probability) {
        file.probabilities.emplace();
    }
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split(lines[r], ',');
        if (cells.size() != header.size()) {
            throw InputError("'" + path + "': row " + std::to_string(r + 1) +
                             " has the wrong number of columns");
        }
        file.ids.push_back(cells[0]);
        file.raw.push_back(parse_number(cells[1], false, cell_position(r + 1, 2)));
        if (with_probability) {
            file.probabilities->push_back(
                parse_number(cells[2], false, cell_position(r + 1, 3)));
        }
    }
    return file;
}

namespace {

const char* kReportHeader =
    "detector,k,scheme,distribution,fold,auc_raw,auc_transformed,rank_stable,"
    "f1_threshold,f1";

} // namespace

void write_report(const std::string& path, const evaluation::EvaluationReport& report) {
    std::ostringstream out;
    out << kReportHeader << '\n';
    for (const auto& e : report.entries) {
        out << e.detector << ',' << e.k << ',' << e.scheme << ',' << e.distribution
            << ',' << e.fold << ',' << format_double(e.auc_raw) << ','
            << format_double(e.auc_transformed) << ',' << (e.rank_stable ? 1 : 0) << ','
            << format_double(e.f1_threshold) << ',' << format_double(e.f1) << '\n';
    }
    atomic_write(path, out.str());
}

evaluation::EvaluationReport read_report(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != kReportHeader) {
        throw InputError("'" + path + "' is not an evaluation report");
    }
    evaluation::EvaluationReport report;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split(lines[r], ',');
        if (cells.size() != 10) {
            throw InputError("'" + path + "': row " + std::to_string(r + 1) +
                             " has the wrong number of columns");
        }
        evaluation::ReportEntry e;
        e.detector = cells[0];
        e.k = static_cast<std::size_t>(
            parse_number(cells[1], false, cell_position(r + 1, 2)));
        e.scheme = cells[2];
        e.distribution = cells[3];
        e.fold = static_cast<std::size_t>(
            parse_number(cells[4], false, cell_position(r + 1, 5)));
        e.auc_raw = parse_number(cells[5], false, cell_position(r + 1, 6));
        e.auc_transformed = parse_number(cells[6], false, cell_position(r + 1, 7));
        e.rank_stable = parse_number(cells[7], false, cell_position(r + 1, 8)) != 0.0;
        e.f1_threshold = parse_number(cells[8], true, cell_position(r + 1, 9));
        e.f1 = parse_number(cells[9], false, cell_position(r + 1, 10));
        report.entries.push_back(std::move(e));
    }
    return report;
}

} // namespace distprob::io
