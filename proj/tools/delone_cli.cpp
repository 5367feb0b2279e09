// Command-line front end: validation, constructions, metrics, spectra and
// measure classification, wired for reproducible file-to-file runs.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "delone/config.hpp"
#include "delone/experiment.hpp"
#include "delone/generate.hpp"
#include "delone/serialize.hpp"

namespace fs = std::filesystem;
using namespace delone;

namespace {

// exit code 4: a requested assertion did not hold
struct assertion_failure : error {
    using error::error;
};

struct GlobalOpts {
    std::uint64_t seed = 1;
    double tol = 1e-3;
    std::string out_dir = ".";
    std::string format = "csv";
    std::string command_line;
};

std::string join_args(int argc, char** argv) {
    std::ostringstream os;
    for (int i = 0; i < argc; ++i) os << (i ? " " : "") << argv[i];
    return os.str();
}

io::Provenance make_prov(const GlobalOpts& g, const std::string& extra = "") {
    io::Provenance p;
    p.command = g.command_line;
    p.config_hash = fnv1a64(g.command_line + "|" + extra);
    return p;
}

fs::path out_path(const GlobalOpts& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return fs::path(g.out_dir) / name;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw error("cannot write " + p.string());
    return os;
}

spectra::Potential potential_from(double depth, double half_width, double shoulder, bool flat) {
    if (flat) return spectra::Potential::zero(half_width);
    return spectra::Potential::trapezoid_well(depth, half_width, shoulder);
}

std::pair<double, double> parse_range(const std::string& s, const char* what) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw parse_error(std::string(what) + ": expected lo:hi");
    try {
        return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw parse_error(std::string(what) + ": bad number");
    }
}

// --------------------------------------------------------------------------

int cmd_validate(const GlobalOpts& g, const std::string& file, double pitch) {
    io::AnyPointSet set = io::load_point_set(file);
    bool pack_ok = false, cover_ok = false;
    io::json report;
    if (auto* w = std::get_if<geometry::WindowedPointSet>(&set)) {
        double use_pitch = pitch > 0.0 ? pitch : w->params.r / 8.0;
        auto viol = geometry::packing_violation(w->points, w->params.r);
        pack_ok = !viol.has_value();
        report["packing"] = pack_ok;
        if (viol) {
            report["offending_pair"] = {viol->first, viol->second};
            std::cout << "packing: FAIL, points " << viol->first << " and " << viol->second
                      << " are " << geometry::dist(w->points[viol->first], w->points[viol->second])
                      << " apart (< 2r = " << 2.0 * w->params.r << ")\n";
        } else {
            std::cout << "packing: ok (pairwise >= 2r = " << 2.0 * w->params.r << ")\n";
        }
        double shrunk = w->window.S - w->params.R;
        if (shrunk <= 0.0) {
            cover_ok = true;  // nothing to certify on an empty region
            std::cout << "covering: window smaller than R, nothing to check\n";
        } else {
            auto cert = geometry::verify_covering(w->points, w->params.R,
                                                  geometry::Box{shrunk}, use_pitch, w->params.d);
            cover_ok = cert.covered;
            report["covering"] = cert.covered;
            report["certified_bound"] = cert.certified_bound;
            std::cout << "covering on Q(" << shrunk << "): " << (cert.covered ? "ok" : "FAIL")
                      << ", certified bound " << cert.certified_bound << " (R = " << w->params.R
                      << ")\n";
        }
    } else {
        auto& cg = std::get<geometry::CrystallographicSet>(set);
        double use_pitch = pitch > 0.0 ? pitch : cg.params.r / 8.0;
        pack_ok = geometry::verify_packing(cg) && geometry::per_lattice_check(cg) &&
                  cg.period > 2.0 * cg.params.r;
        report["packing"] = pack_ok;
        std::cout << "packing/periodicity: " << (pack_ok ? "ok" : "FAIL") << "\n";
        auto cert = geometry::verify_covering(cg, use_pitch);
        cover_ok = cert.covered;
        report["covering"] = cert.covered;
        report["certified_bound"] = cert.certified_bound;
        std::cout << "covering on one period: " << (cert.covered ? "ok" : "FAIL")
                  << ", certified bound " << cert.certified_bound << " (R = " << cg.params.R
                  << ")\n";
    }
    if (g.format == "json") std::cout << report.dump(2) << "\n";
    return (pack_ok && cover_ok) ? 0 : 4;
}

int cmd_extend(const GlobalOpts& g, const std::string& file, double S, double pitch,
               const std::string& out, bool check_agreement) {
    io::AnyPointSet set = io::load_point_set(file);
    auto* w = std::get_if<geometry::WindowedPointSet>(&set);
    if (!w) throw invalid_input("extend expects a windowed point set");
    double use_pitch = pitch > 0.0 ? pitch : w->params.r / 8.0;
    auto rho = geometry::crystallographic_extension(*w, S, use_pitch);
    if (check_agreement) {
        std::vector<geometry::Point> inner;
        for (const auto& p : w->points)
            if (geometry::sup_norm(p) <= S) inner.push_back(p);
        if (!geometry::set_equal(rho.unfold(S), inner))
            throw assertion_failure("extension does not reproduce the input on Q(S)");
        std::cout << "agreement on Q(" << S << "): exact\n";
    }
    auto path = out.empty() ? out_path(g, "extended.json") : fs::path(out);
    io::write_json_file(path.string(), io::to_json(rho), make_prov(g));
    std::cout << "period " << rho.period << ", motif size " << rho.motif.size() << " -> "
              << path.string() << "\n";
    return 0;
}

int cmd_glue(const GlobalOpts& g, const std::string& omega_file, const std::string& gamma_file,
             double S, double pitch, const std::string& out) {
    io::AnyPointSet oset = io::load_point_set(omega_file);
    io::AnyPointSet gset = io::load_point_set(gamma_file);
    auto* w = std::get_if<geometry::WindowedPointSet>(&oset);
    auto* cg = std::get_if<geometry::CrystallographicSet>(&gset);
    if (!w || !cg)
        throw invalid_input("glue expects a windowed set and a crystallographic tail");
    double use_pitch = pitch > 0.0 ? pitch : w->params.r / 8.0;
    auto res = geometry::glue(*w, *cg, S, use_pitch);
    auto path = out.empty() ? out_path(g, "glued.json") : fs::path(out);
    io::json payload = io::to_json(res.set);
    payload["tail"] = io::to_json(res.tail);
    payload["agree_radius"] = res.agree_radius;
    payload["tail_radius"] = res.tail_radius;
    io::write_json_file(path.string(), payload, make_prov(g));
    std::cout << res.set.points.size() << " points, " << res.additions.size()
              << " added in the annulus -> " << path.string() << "\n";
    return 0;
}

int cmd_dist(const GlobalOpts& g, const std::string& a_file, const std::string& b_file,
             double tol) {
    io::AnyPointSet a = io::load_point_set(a_file);
    io::AnyPointSet b = io::load_point_set(b_file);
    auto d = topology::natural_distance(io::ref_of(a), io::ref_of(b), tol);
    if (g.format == "json") {
        std::cout << io::json{{"delta", d.value}, {"error_bound", d.error_bound}}.dump() << "\n";
    } else {
        std::cout << "delta,delta_error_bound\n"
                  << fmt_double(d.value) << "," << fmt_double(d.error_bound) << "\n";
    }
    return 0;
}

std::vector<topology::ConvergenceLevel> parse_levels(const std::string& spec) {
    std::vector<topology::ConvergenceLevel> levels;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        auto c1 = tok.find(':');
        auto c2 = tok.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw parse_error("levels: expected l:L:eps[,l:L:eps...]");
        try {
            levels.push_back({std::stod(tok.substr(0, c1)),
                              std::stod(tok.substr(c1 + 1, c2 - c1 - 1)),
                              std::stod(tok.substr(c2 + 1))});
        } catch (const std::exception&) {
            throw parse_error("levels: bad number in " + tok);
        }
    }
    if (levels.empty()) throw parse_error("levels: none given");
    return levels;
}

int cmd_converge(const GlobalOpts& g, const std::string& limit_file,
                 const std::vector<std::string>& seq_files, const std::string& levels_spec,
                 double tol, const std::string& out) {
    io::AnyPointSet limit = io::load_point_set(limit_file);
    std::vector<io::AnyPointSet> seq;
    for (const auto& f : seq_files) seq.push_back(io::load_point_set(f));
    std::vector<geometry::SetRef> refs;
    for (const auto& s : seq) refs.push_back(io::ref_of(s));
    auto levels = parse_levels(levels_spec);
    auto rep = topology::convergence_report(refs, io::ref_of(limit), levels, tol);

    auto path = out.empty() ? out_path(g, "converge.csv") : fs::path(out);
    auto os = open_out(path);
    io::CsvWriter w(os);
    w.provenance(make_prov(g));
    w.header({"n", "L", "local_hausdorff", "delta", "delta_error_bound"});
    for (const auto& lv : rep.levels) {
        for (std::size_t i = 0; i < refs.size(); ++i) {
            std::string lh = lv.local_h[i] ? fmt_double(*lv.local_h[i]) : "nan";
            w.row({std::to_string(i + 1), fmt_double(lv.level.L), lh, fmt_double(rep.delta[i]),
                   fmt_double(rep.delta_bound[i])});
        }
        std::cout << "level l=" << lv.level.l << " L=" << lv.level.L << " eps=" << lv.level.eps
                  << ": "
                  << (lv.n0 ? ("n0 = " + std::to_string(*lv.n0)) : std::string("not attained"))
                  << ", spurious at final n: " << lv.final_spurious.size() << "\n";
    }
    std::cout << "-> " << path.string() << "\n";
    return 0;
}

int cmd_bands(const GlobalOpts& g, const std::string& file, double depth, double half_width,
              double shoulder, bool flat, const std::string& window, double h, double tol,
              int scan, const std::string& out_prefix) {
    io::AnyPointSet set = io::load_point_set(file);
    auto* cg = std::get_if<geometry::CrystallographicSet>(&set);
    if (!cg) throw invalid_input("bands expects a crystallographic set");
    auto [e_lo, e_hi] = parse_range(window, "window");
    auto v = potential_from(depth, half_width, shoulder, flat);
    auto br = spectra::bands(*cg, v, h, e_lo, e_hi, tol, scan);
    if (br.h_adjusted)
        std::cout << "note: h adjusted to " << br.h_used << " (" << br.cell_steps
                  << " steps per period)\n";
    auto prov = make_prov(g);
    auto csv = open_out(out_path(g, out_prefix + ".csv"));
    io::write_interval_csv(csv, br.bands, prov);
    auto svg = open_out(out_path(g, out_prefix + ".svg"));
    io::write_band_svg(svg, {{"bands", br.bands}}, e_lo, e_hi, prov);
    std::cout << br.bands.intervals().size() << " band(s) in [" << e_lo << ", " << e_hi
              << "] -> " << out_path(g, out_prefix + ".csv").string() << "\n";
    return 0;
}

int cmd_uset(const GlobalOpts& g, const std::string& f1, const std::string& f2, double depth,
             double half_width, double shoulder, bool flat, const std::string& window, double h,
             double tol, int scan, bool require_nonempty, const std::string& out_prefix) {
    io::AnyPointSet s1 = io::load_point_set(f1);
    io::AnyPointSet s2 = io::load_point_set(f2);
    auto* g1 = std::get_if<geometry::CrystallographicSet>(&s1);
    auto* g2 = std::get_if<geometry::CrystallographicSet>(&s2);
    if (!g1 || !g2) throw invalid_input("uset expects two crystallographic sets");
    auto [e_lo, e_hi] = parse_range(window, "window");
    auto v = potential_from(depth, half_width, shoulder, flat);
    auto b1 = spectra::bands(*g1, v, h, e_lo, e_hi, tol, scan);
    auto b2 = spectra::bands(*g2, v, h, e_lo, e_hi, tol, scan);
    auto u = spectra::symmetric_interior_difference(b1.bands, b2.bands);
    auto prov = make_prov(g);
    auto csv = open_out(out_path(g, out_prefix + ".csv"));
    io::write_interval_csv(csv, u, prov);
    auto svg = open_out(out_path(g, out_prefix + ".svg"));
    io::write_band_svg(svg, {{"bands A", b1.bands}, {"bands B", b2.bands}, {"U", u}}, e_lo, e_hi,
                       prov);
    std::cout << "U has " << u.intervals().size() << " piece(s), total length " << u.measure()
              << " -> " << out_path(g, out_prefix + ".csv").string() << "\n";
    if (require_nonempty && u.empty())
        throw assertion_failure("U is empty but --require-nonempty was given");
    return 0;
}

int cmd_specmeasure(const GlobalOpts& g, const std::string& file, double depth,
                    double half_width, double shoulder, bool flat, const std::string& grid_spec,
                    const std::string& xi_spec, const std::string& out) {
    io::AnyPointSet set = io::load_point_set(file);
    auto v = potential_from(depth, half_width, shoulder, flat);
    // grid x0:x1:h
    auto c1 = grid_spec.find(':');
    auto c2 = grid_spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw parse_error("grid: expected x0:x1:h");
    spectra::Grid1D grid = spectra::Grid1D::make(std::stod(grid_spec.substr(0, c1)),
                                                 std::stod(grid_spec.substr(c1 + 1, c2 - c1 - 1)),
                                                 std::stod(grid_spec.substr(c2 + 1)));
    auto [xc, xhw] = parse_range(xi_spec, "xi");
    auto V = spectra::sample_potential(io::ref_of(set), v, grid);
    auto T = spectra::assemble(V, grid.h, spectra::Boundary::dirichlet);
    spectra::StateVector xi(static_cast<std::size_t>(grid.n));
    for (int i = 0; i < grid.n; ++i)
        xi[static_cast<std::size_t>(i)] = std::max(0.0, 1.0 - std::abs(grid.node(i) - xc) / xhw);
    double nv = spectra::norm(xi);
    if (nv == 0.0) throw invalid_input("xi vanishes on the grid");
    for (auto& c : xi) c /= nv;
    auto mu = spectra::spectral_measure(T, xi);
    auto path = out.empty() ? out_path(g, "specmeasure.json") : fs::path(out);
    io::json payload = io::to_json(mu);
    payload["note"] = "discrete-model spectral measure of a finite truncation";
    io::write_json_file(path.string(), payload, make_prov(g));
    std::cout << mu.atoms().size() << " atoms, total mass " << mu.total_mass() << " -> "
              << path.string() << "\n";
    return 0;
}

int cmd_classify(const GlobalOpts& g, const std::vector<std::string>& files, int cantor_depth,
                 int n_max, double K, const std::string& out) {
    std::vector<std::pair<std::string, measures::Measure>> input;
    for (const auto& f : files) input.emplace_back(f, io::parse_measure(io::read_json_file(f)));
    if (cantor_depth > 0)
        input.emplace_back("cantor(" + std::to_string(cantor_depth) + ")",
                           measures::cantor_measure(cantor_depth));
    if (input.empty()) throw invalid_input("classify: no measures given");
    auto path = out.empty() ? out_path(g, "classify.csv") : fs::path(out);
    auto os = open_out(path);
    io::CsvWriter w(os);
    w.provenance(make_prov(g));
    w.header({"measure", "first_atom_n", "first_density_n", "diffusive", "singular", "sc_proxy"});
    for (const auto& [name, mu] : input) {
        auto c = measures::classify(mu, n_max, measures::CompactWindow{K});
        w.row({name, c.first_atom_n ? std::to_string(*c.first_atom_n) : "none",
               c.first_density_n ? std::to_string(*c.first_density_n) : "none",
               c.diffusive ? "1" : "0", c.singular ? "1" : "0", c.sc_proxy ? "1" : "0"});
        std::cout << name << ": "
                  << (c.sc_proxy ? "sc-proxy"
                                 : (c.diffusive ? "diffusive" : (c.singular ? "singular" : "mixed")))
                  << "\n";
    }
    std::cout << "-> " << path.string() << "\n";
    return 0;
}

int cmd_experiment(const GlobalOpts& g, const std::string& config_file, bool seed_given) {
    auto kv = config::KeyValues::parse_file(config_file);
    auto cfg = config::ExperimentConfig::from(kv);
    if (seed_given) cfg.seed = g.seed;

    SplitMix64 rng(cfg.seed);
    double W = cfg.window_radius();
    auto omega = generate::jittered_window(rng, 1, W, cfg.spacing, cfg.jitter, cfg.r, cfg.R);
    auto tail = generate::cubic_lattice(1, cfg.tail_period, cfg.r, cfg.R);

    io::Provenance prov;
    prov.command = g.command_line;
    prov.config_hash = cfg.hash();

    auto run_path = [&](experiment::Path path, const std::string& name) {
        auto res = experiment::approximation_experiment(
            omega, path == experiment::Path::periodic_tail
                       ? std::optional<geometry::CrystallographicSet>(tail)
                       : std::nullopt,
            path, cfg.settings);
        auto os = open_out(out_path(g, name));
        io::CsvWriter w(os);
        w.provenance(prov);
        w.header({"n", "delta", "delta_error_bound", "srs_distance", "eig_hausdorff", "bands"});
        for (const auto& row : res.rows)
            w.row({fmt_double(row.S), fmt_double(row.delta), fmt_double(row.delta_bound),
                   fmt_double(row.srs), fmt_double(row.eig_hausdorff),
                   row.band_set ? io::interval_set_cell(*row.band_set) : ""});
        return res;
    };

    auto ad1 = run_path(experiment::Path::periodic_extension, "experiment_ad1.csv");
    auto ad2 = run_path(experiment::Path::periodic_tail, "experiment_ad2.csv");

    // built-in assertions on the run
    for (const auto* res : {&ad1, &ad2}) {
        const auto& rows = res->rows;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double bound = 2.0 / std::sqrt(1.0 + rows[i].S * rows[i].S) + cfg.settings.delta_tol;
            if (rows[i].delta > bound)
                throw assertion_failure("delta exceeds the tail bound at S = " +
                                        fmt_double(rows[i].S));
            if (i > 0 && rows[i].delta > rows[i - 1].delta + 1e-12)
                throw assertion_failure("delta column is not monotone at S = " +
                                        fmt_double(rows[i].S));
        }
    }
    {
        spectra::Grid1D grid =
            spectra::Grid1D::make(cfg.settings.grid_x0, cfg.settings.grid_x1, cfg.settings.grid_h);
        auto V_tail = spectra::sample_potential(&tail, cfg.settings.v, grid);
        for (double S : cfg.settings.schedule) {
            auto glued = geometry::glue(omega, tail, S, cfg.settings.pitch).set;
            auto V_glue = spectra::sample_potential(&glued, cfg.settings.v, grid);
            double cut = S + 2.0 * cfg.R + cfg.r + cfg.settings.v.half_width;
            for (int i = 0; i < grid.n; ++i)
                if (std::abs(grid.node(i)) > cut &&
                    V_glue[static_cast<std::size_t>(i)] != V_tail[static_cast<std::size_t>(i)])
                    throw assertion_failure("glued potential differs from the tail beyond Q(" +
                                            fmt_double(cut) + ")");
        }
    }

    // convergence curves for both paths
    {
        std::vector<double> xs = cfg.settings.schedule;
        std::vector<std::vector<double>> curves(4);
        for (const auto& row : ad1.rows) {
            curves[0].push_back(row.delta);
            curves[1].push_back(row.srs);
        }
        for (const auto& row : ad2.rows) {
            curves[2].push_back(row.delta);
            curves[3].push_back(row.srs);
        }
        auto svg = open_out(out_path(g, "convergence.svg"));
        io::write_curve_svg(svg, xs, curves,
                            {"delta (extension)", "srs (extension)", "delta (tail)", "srs (tail)"},
                            prov);
    }
    std::cout << "experiment: seed " << cfg.seed << ", schedule size "
              << cfg.settings.schedule.size() << ", outputs in " << g.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    GlobalOpts g;
    g.command_line = join_args(argc, argv);

    CLI::App app{"Delone-set constructions, compactified metrics, discrete Hamiltonian spectra "
                 "and measure classification"};
    app.require_subcommand(1);
    bool seed_given = false;
    app.add_option("--seed", g.seed, "deterministic seed")->each([&](const std::string&) {
        seed_given = true;
    });
    app.add_option("--tol", g.tol, "default tolerance for metric commands");
    app.add_option("--out-dir", g.out_dir, "directory for output files");
    app.add_option("--format", g.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));

    std::string file_a, file_b, out_file, levels_spec = "2:5:0.001";
    std::string window_spec = "0:30", grid_spec = "-20:20:0.05", xi_spec = "0:1";
    std::vector<std::string> seq_files;
    double S = 5.0, pitch = 0.0, depth = -1.0, half_width = 0.3, shoulder = 0.05;
    double band_h = 1e-3, band_tol = 1e-6, K = 5.0;
    int scan = 4097, n_max = 64, cantor_depth = 0;
    bool check_agreement = false, flat = false, require_nonempty = false;

    auto* validate = app.add_subcommand("validate", "check the (r,R) conditions of a set file");
    validate->add_option("file", file_a)->required();
    validate->add_option("--pitch", pitch, "covering grid pitch (default r/8)");

    auto* extend = app.add_subcommand("extend", "periodic extension agreeing on Q(S)");
    extend->add_option("file", file_a)->required();
    extend->add_option("-S,--radius", S, "agreement half-width")->required();
    extend->add_option("--pitch", pitch);
    extend->add_option("-o,--out", out_file);
    extend->add_flag("--check-agreement", check_agreement);

    auto* glue_cmd = app.add_subcommand("glue", "interpolate to a periodic tail outside Q(S+2R+r)");
    glue_cmd->add_option("omega", file_a)->required();
    glue_cmd->add_option("gamma", file_b)->required();
    glue_cmd->add_option("-S,--radius", S)->required();
    glue_cmd->add_option("--pitch", pitch);
    glue_cmd->add_option("-o,--out", out_file);

    auto* dist = app.add_subcommand("dist", "compactified metric between two set files");
    dist->add_option("a", file_a)->required();
    dist->add_option("b", file_b)->required();

    auto* conv = app.add_subcommand("converge", "convergence diagnostics for a sequence");
    conv->add_option("limit", file_a)->required();
    conv->add_option("sequence", seq_files)->required()->expected(-1);
    conv->add_option("--levels", levels_spec, "l:L:eps[,...]");
    conv->add_option("-o,--out", out_file);

    auto add_potential_opts = [&](CLI::App* c) {
        c->add_option("--depth", depth, "well depth");
        c->add_option("--half-width", half_width, "well half-width");
        c->add_option("--shoulder", shoulder, "ramp width");
        c->add_flag("--flat", flat, "use the zero potential");
    };

    auto* bands_cmd = app.add_subcommand("bands", "band structure of a periodic operator");
    bands_cmd->add_option("file", file_a)->required();
    add_potential_opts(bands_cmd);
    bands_cmd->add_option("--window", window_spec, "energy window lo:hi");
    bands_cmd->add_option("--step", band_h, "grid step (adjusted to divide the period)");
    bands_cmd->add_option("--band-tol", band_tol);
    bands_cmd->add_option("--scan", scan);
    bands_cmd->add_option("-o,--out", out_file, "output prefix");

    auto* uset = app.add_subcommand("uset", "exclusive spectral region of two periodic operators");
    uset->add_option("a", file_a)->required();
    uset->add_option("b", file_b)->required();
    add_potential_opts(uset);
    uset->add_option("--window", window_spec);
    uset->add_option("--step", band_h);
    uset->add_option("--band-tol", band_tol);
    uset->add_option("--scan", scan);
    uset->add_flag("--require-nonempty", require_nonempty, "exit 4 when U is empty");
    uset->add_option("-o,--out", out_file, "output prefix");

    auto* spec = app.add_subcommand("specmeasure", "spectral measure of a windowed discretization");
    spec->add_option("file", file_a)->required();
    add_potential_opts(spec);
    spec->add_option("--grid", grid_spec, "x0:x1:h");
    spec->add_option("--xi", xi_spec, "center:halfwidth of the hat state");
    spec->add_option("-o,--out", out_file);

    auto* classify = app.add_subcommand("classify", "measure-family membership table");
    classify->add_option("files", seq_files);
    classify->add_option("--cantor", cantor_depth, "append the depth-k middle-thirds measure");
    classify->add_option("--n-max", n_max);
    classify->add_option("-K,--window", K, "compact window half-width");
    classify->add_option("-o,--out", out_file);

    auto* exp = app.add_subcommand("experiment", "run both approximation schedules from a config");
    exp->add_option("config", file_a)->required();

    // global flags are accepted after the subcommand as well
    for (auto* sub : app.get_subcommands({})) sub->fallthrough(true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(g, file_a, pitch);
        if (app.got_subcommand(extend))
            return cmd_extend(g, file_a, S, pitch, out_file, check_agreement);
        if (app.got_subcommand(glue_cmd)) return cmd_glue(g, file_a, file_b, S, pitch, out_file);
        if (app.got_subcommand(dist)) return cmd_dist(g, file_a, file_b, g.tol);
        if (app.got_subcommand(conv))
            return cmd_converge(g, file_a, seq_files, levels_spec, g.tol, out_file);
        if (app.got_subcommand(bands_cmd))
            return cmd_bands(g, file_a, depth, half_width, shoulder, flat, window_spec, band_h,
                             band_tol, scan, out_file.empty() ? "bands" : out_file);
        if (app.got_subcommand(uset))
            return cmd_uset(g, file_a, file_b, depth, half_width, shoulder, flat, window_spec,
                            band_h, band_tol, scan, require_nonempty,
                            out_file.empty() ? "uset" : out_file);
        if (app.got_subcommand(spec))
            return cmd_specmeasure(g, file_a, depth, half_width, shoulder, flat, grid_spec,
                                   xi_spec, out_file);
        if (app.got_subcommand(classify))
            return cmd_classify(g, seq_files, cantor_depth, n_max, K, out_file);
        if (app.got_subcommand(exp)) return cmd_experiment(g, file_a, seed_given);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const assertion_failure& e) {
        std::cerr << "assertion failed: " << e.what() << "\n";
        return 4;
    } catch (const resource_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 5;
    } catch (const precondition_error& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 3;
    } catch (const invalid_input& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
