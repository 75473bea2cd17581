#include "cmorph/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "cmorph/errors.hpp"
#include "cmorph/interpolator.hpp"
#include "cmorph/io.hpp"
#include "cmorph/metrics.hpp"
#include "cmorph/synth.hpp"

namespace cmorph {

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) {
        throw InputError("cannot write '" + path + "'");
    }
}

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct PipelineFlags {
    std::string se = "square3";
    int connectivity = 8;

    InterpolationOptions options() const {
        InterpolationOptions o;
        o.se = StructuringElement::by_name(se);
        o.connectivity = connectivity == 4 ? Connectivity::Four : Connectivity::Eight;
        return o;
    }
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
    cmd->add_option("--se", f.se, "structuring element")->check(CLI::IsMember({"square3", "cross3"}));
    cmd->add_option("--connectivity", f.connectivity, "contour connectivity")->check(CLI::IsMember({4, 8}));
}

void run_metrics(const std::string& a_path, const std::string& b_path, std::ostream& out) {
    const ElevationGrid a = read_ascii_grid(a_path).grid;
    const ElevationGrid b = read_ascii_grid(b_path).grid;
    if (a.dims() != b.dims()) {
        throw InputError("grids differ in size: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    std::size_t n = 0, n_pct = 0;
    double sq = 0.0, pct = 0.0;
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < a.cols(); ++c) {
            if (a.is_nodata(r, c) || b.is_nodata(r, c)) {
                continue;
            }
            const double d = a.at(r, c) - b.at(r, c);
            sq += d * d;
            ++n;
            // b is the reference
            if (b.at(r, c) != 0.0) {
                pct += std::abs(d) / std::abs(b.at(r, c));
                ++n_pct;
            }
        }
    }
    if (n == 0) {
        throw InputError("the grids share no valid cells");
    }
    out << "cells " << n << '\n';
    out << "rmse " << g6(std::sqrt(sq / static_cast<double>(n))) << '\n';
    out << "mape_percent " << (n_pct > 0 ? g6(100.0 * pct / static_cast<double>(n_pct)) : "n/a") << '\n';
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Contour-to-DEM interpolation with morphological median sets", "cmorph"};
    app.require_subcommand(1);

    std::string input, output, render, table, spec_path, other;
    std::optional<double> nodata;
    std::optional<std::uint64_t> seed;
    std::string parity;
    PipelineFlags flags;

    CLI::App* interp = app.add_subcommand("interpolate", "fill a contour grid into a dense DEM");
    interp->add_option("input", input, "contour grid (.asc)")->required();
    interp->add_option("-o,--output", output, "DEM grid (.asc)")->required();
    interp->add_option("--render", render, "also write a 16-bit PGM heightmap");
    interp->add_option("--nodata", nodata, "nodata_value for the output header");
    add_pipeline_flags(interp, flags);

    CLI::App* synth = app.add_subcommand("synth", "rasterize a shape spec into a contour grid");
    synth->add_option("spec", spec_path, "spec (.json)")->required();
    synth->add_option("-o,--output", output, "contour grid (.asc)")->required();
    synth->add_option("--nodata", nodata, "nodata_value for the output header (default -1)");

    CLI::App* val = app.add_subcommand("validate", "hold out alternate contours and score the interpolation");
    val->add_option("input", input, "contour grid (.asc)")->required();
    auto* seed_opt = val->add_option("--seed", seed, "seed for the skip parity (default 0)");
    auto* parity_opt =
        val->add_option("--parity", parity, "fixed skip parity")->check(CLI::IsMember({"even", "odd"}));
    seed_opt->excludes(parity_opt);
    val->add_option("-o,--output", output, "report (.json)")->required();
    val->add_option("--table", table, "also write a plain-text table");
    add_pipeline_flags(val, flags);

    CLI::App* met = app.add_subcommand("metrics", "RMSE and MAPE of grid a against reference grid b");
    met->add_option("a", input, "grid (.asc)")->required();
    met->add_option("b", other, "reference grid (.asc)")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (interp->parsed()) {
            const AsciiGrid in = read_ascii_grid(input);
            const ContourMap map = ContourMap::from_grid(in.grid);
            const InterpolationResult res = interpolate(map, flags.options());
            AsciiGridHeader h = in.header;
            if (nodata) {
                h.nodata_value = *nodata;
            }
            write_ascii_grid(res.dem, output, h);
            if (!render.empty()) {
                render_heightmap(res.dem, render);
            }
        } else if (synth->parsed()) {
            const ContourMap map = generate(synth_spec_from_json(read_text(spec_path)));
            AsciiGridHeader h;
            if (nodata) {
                h.nodata_value = *nodata;
            }
            write_ascii_grid(map.grid, output, h);
        } else if (val->parsed()) {
            const ContourMap map = ContourMap::from_grid(read_ascii_grid(input).grid);
            const ValidationReport report =
                parity.empty() ? validate(map, seed.value_or(0), flags.options())
                               : validate(map, parity == "even" ? Parity::Even : Parity::Odd, flags.options());
            write_text(output, report_to_json(report));
            if (!table.empty()) {
                write_text(table, report_to_table(report));
            }
        } else if (met->parsed()) {
            run_metrics(input, other, out);
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const ContractError& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace cmorph
