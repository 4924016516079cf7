// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "sreldiag/dataset.hpp"

namespace sreldiag {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

constexpr std::size_t kLabelColumns = 4;

}  // namespace

void write_dataset_csv(const LabeledDataset& ds, std::ostream& out) {
    ds.validate();
    const std::size_t n = ds.grid()->size();
    out << "id,cause,severity,split";
    for (std::size_t k = 0; k < n; ++k) out << ",f_" << k;
    out << "\n#grid,,,";
    for (double f : ds.grid()->points()) out << ',' << format_double(f);
    out << '\n';
    for (const auto& s : ds.samples()) {
        out << s.id << ',' << cause_name(s.label.cause) << ',' << s.label.severity << ',' << split_name(s.split);
        for (double v : s.pattern.magnitude_db) out << ',' << format_double(v);
        out << '\n';
    }
}

void write_dataset_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_dataset_csv(ds, f);
    if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

LabeledDataset read_dataset_csv(std::istream& in) {
    std::string line;
    std::size_t row = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };

    if (!next_line()) throw DatasetFormatError(1, "missing header");
    const auto header = split_commas(line);
    if (header.size() < kLabelColumns + 2 || header[0] != "id" || header[1] != "cause" || header[2] != "severity" ||
        header[3] != "split")
        throw DatasetFormatError(row, "header must start with id,cause,severity,split and list >= 2 frequencies");
    const std::size_t n = header.size() - kLabelColumns;
    for (std::size_t k = 0; k < n; ++k)
        if (header[kLabelColumns + k] != "f_" + std::to_string(k))
            throw DatasetFormatError(row, "header column " + std::to_string(kLabelColumns + k) + " should be f_" +
                                              std::to_string(k));

    if (!next_line()) throw DatasetFormatError(row + 1, "missing #grid row");
    const auto grid_cells = split_commas(line);
    if (grid_cells.size() != header.size() || grid_cells[0] != "#grid")
        throw DatasetFormatError(row, "second row must be the #grid row with one frequency per column");
    std::vector<double> freqs(n);
    for (std::size_t k = 0; k < n; ++k)
        if (!parse_double(grid_cells[kLabelColumns + k], freqs[k]))
            throw DatasetFormatError(row, "bad grid frequency in column f_" + std::to_string(k));
    GridPtr grid;
    try {
        grid = std::make_shared<const FrequencyGrid>(std::move(freqs));
    } catch (const InvalidArgument& e) {
        throw DatasetFormatError(row, e.what());
    }

    LabeledDataset ds(grid);
    std::unordered_set<std::string> ids;
    while (next_line()) {
        if (line.empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != header.size())
            throw DatasetFormatError(row, "expected " + std::to_string(header.size()) + " columns, found " +
                                              std::to_string(cells.size()));
        LabeledSample s;
        s.id = std::string(cells[0]);
        if (s.id.empty()) throw DatasetFormatError(row, "empty id");
        if (!ids.insert(s.id).second) throw DatasetFormatError(row, "duplicate id '" + s.id + "'");
        try {
            s.label.cause = parse_cause(cells[1]);
            double sev = 0;
            if (!parse_double(cells[2], sev) || sev != std::floor(sev))
                throw InvalidArgument("bad severity '" + std::string(cells[2]) + "'");
            s.label.severity = static_cast<int>(sev);
            s.label.validate();
            s.split = parse_split(cells[3]);
        } catch (const InvalidArgument& e) {
            throw DatasetFormatError(row, e.what());
        }
        s.pattern.grid = grid;
        s.pattern.magnitude_db.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            double v = 0;
            if (!parse_double(cells[kLabelColumns + k], v))
                throw DatasetFormatError(row, "unparseable magnitude in column f_" + std::to_string(k));
            if (!std::isfinite(v))
                throw DatasetFormatError(row, "non-finite magnitude in column f_" + std::to_string(k) + " of '" +
                                                  s.id + "'");
            s.pattern.magnitude_db[k] = v;
        }
        ds.add(std::move(s));
    }
    return ds;
}

LabeledDataset read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open dataset '" + path.string() + "'");
    return read_dataset_csv(f);
}

}  // namespace sreldiag
