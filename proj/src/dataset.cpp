#include "funcsel/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "funcsel/errors.hpp"

namespace funcsel {

const char* split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        default: return "test";
    }
}

Split split_from_name(const std::string& name) {
    if (name == "train") return Split::Train;
    if (name == "val") return Split::Val;
    if (name == "test") return Split::Test;
    throw DataError("unknown split label '" + name + "' (expected train/val/test)");
}

std::vector<long> FunctionalDataset::rows_of(Split s) const {
    std::vector<long> rows;
    for (long i = 0; i < size(); ++i)
        if (split[i] == s) rows.push_back(i);
    return rows;
}

Eigen::MatrixXd FunctionalDataset::curves_of(Split s) const {
    const auto rows = rows_of(s);
    Eigen::MatrixXd out(rows.size(), curves.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) out.row(k) = curves.row(rows[k]);
    return out;
}

Eigen::VectorXd FunctionalDataset::responses_of(Split s) const {
    const auto rows = rows_of(s);
    Eigen::VectorXd out(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) out[k] = responses[rows[k]];
    return out;
}

void FunctionalDataset::validate_for_fitting() const {
    if (curves.rows() != responses.size() || curves.rows() != static_cast<long>(split.size()))
        throw DataError("dataset row counts disagree between curves, responses and splits");
    if (curves.cols() != grid.size())
        throw DataError("curve length does not match the grid");
    if (rows_of(Split::Train).empty() || rows_of(Split::Val).empty())
        throw DataError("fitting requires at least one train row and one val row");
}

ResponseStats training_stats(const FunctionalDataset& data) {
    const Eigen::VectorXd y = data.responses_of(Split::Train);
    if (y.size() == 0) throw DataError("no training rows to standardize against");
    ResponseStats s;
    s.mean = y.mean();
    s.sd = std::sqrt((y.array() - s.mean).square().sum() / static_cast<double>(y.size()));
    if (!(s.sd > 0.0))
        throw DataError("training responses have zero standard deviation");
    return s;
}

Eigen::VectorXd standardize(const Eigen::VectorXd& responses, const ResponseStats& stats) {
    if (!(stats.sd > 0.0)) throw DataError("standardization sd must be positive");
    return (responses.array() - stats.mean) / stats.sd;
}

Eigen::VectorXd destandardize(const Eigen::VectorXd& responses, const ResponseStats& stats) {
    if (!(stats.sd > 0.0)) throw DataError("standardization sd must be positive");
    return responses.array() * stats.sd + stats.mean;
}

std::vector<Split> default_split(long n) {
    std::vector<Split> s(n);
    const long n_train = n * 70 / 100;
    const long n_val = n * 15 / 100;
    for (long i = 0; i < n; ++i)
        s[i] = i < n_train ? Split::Train : (i < n_train + n_val ? Split::Val : Split::Test);
    return s;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

double parse_cell(const std::string& cell, long row, std::size_t col) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw DataError("non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                        ", column " + std::to_string(col + 1));
    }
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

FunctionalDataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty dataset file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_line(line);

    // Grid columns are the leading `t_<value>` headers.
    std::size_t L = 0;
    while (L < header.size() && header[L].rfind("t_", 0) == 0) ++L;
    if (L == 0) throw DataError("header has no grid columns (expected t_<value>,...)");
    bool has_response = L < header.size() && header[L] == "response";
    if (!has_response) throw DataError("header is missing the 'response' column after the grid");
    const bool has_split = L + 1 < header.size() && header[L + 1] == "split";

    Eigen::VectorXd grid(L);
    for (std::size_t l = 0; l < L; ++l) grid[l] = parse_cell(header[l].substr(2), 0, l);
    for (std::size_t l = 1; l < L; ++l)
        if (grid[l] <= grid[l - 1])
            throw DataError("grid header is not strictly increasing at column " +
                            std::to_string(l + 1));

    std::vector<Eigen::VectorXd> rows;
    std::vector<double> ys;
    std::vector<Split> splits;
    long rowno = 1;
    while (std::getline(in, line)) {
        ++rowno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_line(line);
        const std::size_t expected = L + 1 + (has_split ? 1 : 0);
        if (cells.size() != expected)
            throw DataError("row " + std::to_string(rowno) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(expected));
        Eigen::VectorXd row(L);
        for (std::size_t l = 0; l < L; ++l) row[l] = parse_cell(cells[l], rowno, l);
        rows.push_back(std::move(row));
        ys.push_back(parse_cell(cells[L], rowno, L));
        if (has_split) splits.push_back(split_from_name(cells[L + 1]));
    }
    if (rows.empty()) throw DataError("dataset has no data rows: " + path);

    FunctionalDataset data;
    data.grid = grid;
    data.curves.resize(static_cast<long>(rows.size()), static_cast<long>(L));
    data.responses.resize(static_cast<long>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        data.curves.row(static_cast<long>(i)) = rows[i].transpose();
        data.responses[static_cast<long>(i)] = ys[i];
    }
    data.split = has_split ? splits : default_split(data.size());
    return data;
}

void save_csv(const FunctionalDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write dataset file: " + path);
    for (Eigen::Index l = 0; l < data.grid.size(); ++l)
        out << "t_" << format_g17(data.grid[l]) << ",";
    out << "response,split\n";
    for (long i = 0; i < data.size(); ++i) {
        for (Eigen::Index l = 0; l < data.curves.cols(); ++l)
            out << format_g17(data.curves(i, l)) << ",";
        out << format_g17(data.responses[i]) << "," << split_name(data.split[i]) << "\n";
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace funcsel
