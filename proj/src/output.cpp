#include <cerrno>
#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "beamlab/errors.hpp"
#include "beamlab/scenario.hpp"

namespace beamlab {

namespace fs = std::filesystem;

std::string format_number(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw DomainError("cannot format number");
    return std::string(buf, end);
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw DomainError("table row width does not match its header");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

Table frames_table(const TimeSeriesResult& series) {
    Table t;
    t.columns = {"t"};
    for (double x : series.metadata.node_positions) t.columns.push_back("x=" + format_number(x));
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        std::vector<double> row = {series.times[k]};
        for (Eigen::Index n = 0; n < series.frames.cols(); ++n) row.push_back(series.frames(static_cast<Eigen::Index>(k), n));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table probes_table(const TimeSeriesResult& series) {
    Table t;
    t.columns = {"t"};
    for (const auto& [node, history] : series.probes) {
        t.columns.push_back("x=" + format_number(series.metadata.node_positions.at(node)));
    }
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        std::vector<double> row = {series.times[k]};
        for (const auto& [node, history] : series.probes) row.push_back(history.at(k));
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
    out << content;
    out.close();
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
}

}  // namespace

std::vector<std::string> write_csv(const ResultSet& r, const std::string& dir) {
    r.check();
    const fs::path root(dir);
    fs::create_directories(root);

    std::vector<std::pair<std::string, std::string>> files;
    if (r.series) {
        files.emplace_back("frames.csv", to_csv(frames_table(*r.series)));
        if (!r.series->probes.empty()) files.emplace_back("probes.csv", to_csv(probes_table(*r.series)));
    }
    if (!r.modes.empty()) {
        Table modes;
        modes.columns = {"mode_index", "beta", "omega_rad_s", "f_hz"};
        for (std::size_t i = 0; i < r.modes.size(); ++i) {
            modes.rows.push_back({static_cast<double>(i + 1), r.modes[i].beta, r.modes[i].omega, r.modes[i].frequency_hz});
        }
        files.emplace_back("modes.csv", to_csv(modes));
    }
    if (!r.sweep.empty()) {
        Table sweep;
        sweep.columns = {"f_hz", "amplitude_m"};
        for (const auto& p : r.sweep) sweep.rows.push_back({p.frequency_hz, p.steady_amplitude});
        files.emplace_back("sweep.csv", to_csv(sweep));
    }
    for (const auto& [name, table] : r.tables) files.emplace_back(name, to_csv(table));
    files.emplace_back("provenance.json", r.provenance.dump(2) + "\n");

    std::vector<std::string> written;
    for (const auto& [name, content] : files) {
        write_file(root / name, content);
        written.push_back(name);
    }
    return written;
}

}  // namespace beamlab
