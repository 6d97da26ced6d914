#include "funcgauss/curve_csv.hpp"

#include <charconv>
#include <ostream>
#include <sstream>
#include <vector>

namespace funcgauss {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const char* context) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw IngestError(std::string(context) + ": cannot parse number '" + token + "'");
    }
    return value;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

void write_curves_csv(std::ostream& out, const LabeledSample& sample) {
    out << "label";
    for (int j = 0; j < sample.grid().size(); ++j) {
        out << ',' << format_double(sample.grid().time(j));
    }
    out << '\n';
    for (int i = 0; i < sample.size(); ++i) {
        out << sample.label(i);
        const auto row = sample.row(i);
        for (double x : row) {
            out << ',' << format_double(x);
        }
        out << '\n';
    }
}

std::string curves_to_csv(const LabeledSample& sample) {
    std::ostringstream os;
    write_curves_csv(os, sample);
    return os.str();
}

LabeledSample read_curves_csv(std::istream& in, Prior prior) {
    std::string line;
    if (!std::getline(in, line)) {
        throw IngestError("curve csv: empty input");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "label") {
        throw IngestError("curve csv: header must be 'label,t0,...,tN' with at least 3 grid times");
    }
    std::vector<double> times;
    times.reserve(header.size() - 1);
    for (std::size_t j = 1; j < header.size(); ++j) {
        times.push_back(parse_double(header[j], "curve csv header"));
    }
    Grid grid = Grid::from_points(std::move(times));

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != grid.size() + 1) {
            throw IngestError("curve csv: row " + std::to_string(lineno) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(grid.size() + 1));
        }
        const double lab = parse_double(fields[0], "curve csv label");
        if (lab != 0.0 && lab != 1.0) {
            throw IngestError("curve csv: row " + std::to_string(lineno) + " label must be 0 or 1");
        }
        std::vector<double> values(static_cast<std::size_t>(grid.size()));
        for (int j = 0; j < grid.size(); ++j) {
            values[static_cast<std::size_t>(j)] =
                parse_double(fields[static_cast<std::size_t>(j) + 1],
                             ("curve csv row " + std::to_string(lineno) + " column " +
                              std::to_string(j + 2))
                                 .c_str());
        }
        rows.push_back(std::move(values));
        labels.push_back(static_cast<int>(lab));
    }
    if (rows.empty()) {
        throw IngestError("curve csv: no data rows");
    }
    CurveMatrix values(static_cast<Eigen::Index>(rows.size()), grid.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < grid.size(); ++j) {
            values(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
        }
    }
    return LabeledSample(grid, std::move(values), std::move(labels), prior);
}

LabeledSample curves_from_csv(const std::string& text, Prior prior) {
    std::istringstream is(text);
    return read_curves_csv(is, prior);
}

}  // namespace funcgauss
