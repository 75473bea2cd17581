#include "cmorph/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "cmorph/errors.hpp"

namespace cmorph {

namespace {

struct Token {
    std::string_view text;
    int column = 0; // 1-based
};

std::vector<Token> split(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i > start) {
            out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
        }
    }
    return out;
}

std::string where(const std::string& source, int line, int column) {
    std::string s = source + ":" + std::to_string(line);
    if (column > 0) {
        s += ":" + std::to_string(column);
    }
    return s;
}

bool parse_double(std::string_view t, double& v) {
    if (!t.empty() && t.front() == '+') {
        t.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    return ec == std::errc() && ptr == t.data() + t.size() && std::isfinite(v);
}

bool blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return out;
}

std::string format_value(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.6g", v);
    return buf.data();
}

} // namespace

AsciiGrid read_ascii_grid(std::istream& in, const std::string& source) {
    static constexpr std::array<const char*, 6> keys = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize",
                                                        "nodata_value"};
    std::array<double, 6> vals{};
    std::string line;
    int lineno = 0;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        if (!std::getline(in, line)) {
            throw InputError(where(source, lineno + 1, 0) + ": missing header line '" + keys[k] + "'");
        }
        ++lineno;
        const std::vector<Token> tok = split(line);
        if (tok.size() != 2 || lower(tok[0].text) != keys[k]) {
            throw InputError(where(source, lineno, tok.empty() ? 0 : tok[0].column) + ": expected header '" + keys[k] +
                             " <value>'");
        }
        if (!parse_double(tok[1].text, vals[k])) {
            throw InputError(where(source, lineno, tok[1].column) + ": non-numeric " + keys[k] + " '" +
                             std::string(tok[1].text) + "'");
        }
    }
    AsciiGrid g;
    AsciiGridHeader& h = g.header;
    for (int k = 0; k < 2; ++k) {
        if (vals[k] < 1 || vals[k] != std::floor(vals[k]) || vals[k] > 1e8) {
            throw InputError(where(source, k + 1, 0) + ": " + keys[k] + " must be a positive integer");
        }
    }
    h.ncols = static_cast<int>(vals[0]);
    h.nrows = static_cast<int>(vals[1]);
    h.xllcorner = vals[2];
    h.yllcorner = vals[3];
    h.cellsize = vals[4];
    h.nodata_value = vals[5];
    if (!(h.cellsize > 0)) {
        throw InputError(where(source, 5, 0) + ": cellsize must be positive");
    }

    g.grid = ElevationGrid(GridDims(h.nrows, h.ncols));
    int row = 0;
    while (row < h.nrows && std::getline(in, line)) {
        ++lineno;
        if (blank(line)) {
            continue;
        }
        const std::vector<Token> tok = split(line);
        if (static_cast<int>(tok.size()) != h.ncols) {
            throw InputError(where(source, lineno, 0) + ": row " + std::to_string(row) + " has " +
                             std::to_string(tok.size()) + " values, header says ncols " + std::to_string(h.ncols));
        }
        for (int c = 0; c < h.ncols; ++c) {
            double v = 0.0;
            if (!parse_double(tok[c].text, v)) {
                throw InputError(where(source, lineno, tok[c].column) + ": non-numeric value '" +
                                 std::string(tok[c].text) + "'");
            }
            g.grid.at(row, c) = v == h.nodata_value ? ElevationGrid::nodata() : v;
        }
        ++row;
    }
    if (row < h.nrows) {
        throw InputError(where(source, lineno, 0) + ": found " + std::to_string(row) + " rows, header says nrows " +
                         std::to_string(h.nrows));
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (!blank(line)) {
            throw InputError(where(source, lineno, 0) + ": extra data after " + std::to_string(h.nrows) + " rows");
        }
    }
    return g;
}

AsciiGrid read_ascii_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    return read_ascii_grid(in, path);
}

void write_ascii_grid(const ElevationGrid& grid, std::ostream& out, const AsciiGridHeader& header) {
    const std::string nodata = format_value(header.nodata_value);
    std::string body;
    for (int r = 0; r < grid.rows(); ++r) {
        for (int c = 0; c < grid.cols(); ++c) {
            if (c > 0) {
                body += ' ';
            }
            if (grid.is_nodata(r, c)) {
                body += nodata;
                continue;
            }
            const std::string v = format_value(grid.at(r, c));
            if (v == nodata) {
                throw InputError("elevation " + v + " at cell (" + std::to_string(r) + "," + std::to_string(c) +
                                 ") collides with nodata_value; choose another nodata value");
            }
            body += v;
        }
        body += '\n';
    }
    out << "ncols " << grid.cols() << '\n'
        << "nrows " << grid.rows() << '\n'
        << "xllcorner " << format_value(header.xllcorner) << '\n'
        << "yllcorner " << format_value(header.yllcorner) << '\n'
        << "cellsize " << format_value(header.cellsize) << '\n'
        << "nodata_value " << nodata << '\n'
        << body;
}

void write_ascii_grid(const ElevationGrid& grid, const std::string& path, const AsciiGridHeader& header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    write_ascii_grid(grid, out, header);
    if (!out.flush()) {
        throw InputError("write failed for '" + path + "'");
    }
}

void render_heightmap(const ElevationGrid& grid, std::ostream& out) {
    if (grid.nodata_count() > 0) {
        throw InputError("cannot render a grid with " + std::to_string(grid.nodata_count()) + " NODATA cells");
    }
    const auto vals = grid.values();
    double lo = 0.0, hi = 0.0;
    if (!vals.empty()) {
        const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
        lo = *mn;
        hi = *mx;
    }
    out << "P5\n" << grid.cols() << ' ' << grid.rows() << "\n65535\n";
    std::vector<char> bytes;
    bytes.reserve(vals.size() * 2);
    for (double v : vals) {
        const auto p = hi > lo ? static_cast<unsigned>(std::lround((v - lo) / (hi - lo) * 65535.0)) : 0u;
        bytes.push_back(static_cast<char>((p >> 8) & 0xff));
        bytes.push_back(static_cast<char>(p & 0xff));
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void render_heightmap(const ElevationGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    render_heightmap(grid, out);
    if (!out.flush()) {
        throw InputError("write failed for '" + path + "'");
    }
}

} // namespace cmorph
