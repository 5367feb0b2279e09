#pragma once

// File formats: JSON point sets and measures (round-trip precision), CSV
// tables with a provenance comment header, and minimal hand-emitted SVG.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "delone/common.hpp"
#include "delone/geometry.hpp"
#include "delone/measures.hpp"
#include "delone/spectra.hpp"
#include "delone/topology.hpp"

namespace delone::io {

using json = nlohmann::json;

struct Provenance {
    std::string command;
    std::uint64_t config_hash = 0;
    std::string version = delone::version();

    json to_json() const {
        return json{{"command", command}, {"config_hash", config_hash}, {"version", version}};
    }

    std::string csv_header() const {
        std::ostringstream os;
        os << "# command: " << command << "\n# config_hash: " << config_hash
           << "\n# version: " << version << "\n";
        return os.str();
    }
};

// ---------------------------------------------------------------------------
// Point sets

using AnyPointSet = std::variant<geometry::WindowedPointSet, geometry::CrystallographicSet>;

inline geometry::SetRef ref_of(const AnyPointSet& s) {
    if (auto* w = std::get_if<geometry::WindowedPointSet>(&s)) return w;
    return &std::get<geometry::CrystallographicSet>(s);
}

inline json to_json(const geometry::WindowedPointSet& w) {
    json j;
    j["d"] = w.params.d;
    j["r"] = w.params.r;
    j["R"] = w.params.R;
    json window = json::array();
    for (int i = 0; i < w.params.d; ++i) window.push_back({-w.window.S, w.window.S});
    j["window"] = window;
    json pts = json::array();
    for (const auto& p : w.points) pts.push_back(p);
    j["points"] = pts;
    return j;
}

inline json to_json(const geometry::CrystallographicSet& g) {
    json j;
    j["d"] = g.params.d;
    j["r"] = g.params.r;
    j["R"] = g.params.R;
    j["period"] = g.period;
    json pts = json::array();
    for (const auto& p : g.motif) pts.push_back(p);
    j["motif"] = pts;
    return j;
}

inline json to_json(const AnyPointSet& s) {
    return std::visit([](const auto& v) { return to_json(v); }, s);
}

inline std::vector<geometry::Point> parse_points(const json& arr, int d, const char* what) {
    if (!arr.is_array()) throw parse_error(std::string(what) + ": expected an array");
    std::vector<geometry::Point> pts;
    for (const auto& e : arr) {
        if (!e.is_array() || static_cast<int>(e.size()) != d)
            throw parse_error(std::string(what) + ": point arity mismatch");
        geometry::Point p;
        for (const auto& c : e) p.push_back(c.get<double>());
        if (!geometry::all_finite(p)) throw parse_error(std::string(what) + ": non-finite value");
        pts.push_back(std::move(p));
    }
    return pts;
}

inline AnyPointSet parse_point_set(const json& j) {
    try {
        int d = j.at("d").get<int>();
        geometry::DeloneParams params{j.at("r").get<double>(), j.at("R").get<double>(), d};
        params.validate();
        if (j.contains("period")) {
            geometry::CrystallographicSet g{j.at("period").get<double>(),
                                            parse_points(j.at("motif"), d, "motif"), params};
            if (!(g.period > 0.0)) throw parse_error("period must be positive");
            return g;
        }
        const json& win = j.at("window");
        if (!win.is_array() || static_cast<int>(win.size()) != d)
            throw parse_error("window: one [-S, S] pair per axis");
        double S = 0.0;
        for (const auto& pair : win) {
            if (!pair.is_array() || pair.size() != 2) throw parse_error("window: bad pair");
            double lo = pair[0].get<double>(), hi = pair[1].get<double>();
            if (lo != -hi || !(hi > 0.0)) throw parse_error("window must be symmetric [-S, S]");
            if (S == 0.0) S = hi;
            if (hi != S) throw parse_error("window must be cubic");
        }
        return geometry::WindowedPointSet{parse_points(j.at("points"), d, "points"),
                                          geometry::Box{S}, params};
    } catch (const json::exception& e) {
        throw parse_error(std::string("point set: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Measures

inline json to_json(const measures::Measure& m) {
    json atoms = json::array();
    for (const auto& a : m.atoms()) atoms.push_back({a.pos, a.mass});
    json density = json::array();
    for (const auto& p : m.density()) density.push_back({p.lo, p.hi, p.height});
    return json{{"atoms", atoms}, {"density", density}};
}

inline measures::Measure parse_measure(const json& j) {
    try {
        std::vector<measures::Atom> atoms;
        for (const auto& a : j.at("atoms")) atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
        std::vector<measures::DensityPiece> density;
        if (j.contains("density"))
            for (const auto& p : j.at("density"))
                density.push_back(
                    {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
        return measures::Measure::make(std::move(atoms), std::move(density));
    } catch (const json::exception& e) {
        throw parse_error(std::string("measure: ") + e.what());
    } catch (const invalid_input& e) {
        throw parse_error(std::string("measure: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Files

inline void write_json_file(const std::string& path, json payload, const Provenance& prov) {
    payload["provenance"] = prov.to_json();
    std::ofstream os(path);
    if (!os) throw error("cannot write " + path);
    os << payload.dump(2) << "\n";
}

inline json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error("cannot read " + path);
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
}

inline AnyPointSet load_point_set(const std::string& path) {
    return parse_point_set(read_json_file(path));
}

// ---------------------------------------------------------------------------
// CSV

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void provenance(const Provenance& p) { os_ << p.csv_header(); }

    void header(const std::vector<std::string>& cols) { line(cols); }

    void row(const std::vector<std::string>& cells) { line(cells); }

    static std::string num(double v) { return fmt_double(v); }

private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ",";
            os_ << cells[i];
        }
        os_ << "\n";
    }

    std::ostream& os_;
};

inline std::string interval_set_cell(const spectra::IntervalSet& s) {
    std::ostringstream os;
    bool first = true;
    for (const auto& iv : s.intervals()) {
        if (!first) os << "|";
        os << fmt_double(iv.lo) << ":" << fmt_double(iv.hi);
        first = false;
    }
    return os.str();
}

inline void write_interval_csv(std::ostream& os, const spectra::IntervalSet& s,
                               const Provenance& prov) {
    CsvWriter w(os);
    w.provenance(prov);
    w.header({"E_low", "E_high", "open_low", "open_high"});
    for (const auto& iv : s.intervals())
        w.row({CsvWriter::num(iv.lo), CsvWriter::num(iv.hi), iv.open_lo ? "1" : "0",
               iv.open_hi ? "1" : "0"});
}

// ---------------------------------------------------------------------------
// SVG (rectangles for interval rows, a polyline for curves)

inline void write_band_svg(std::ostream& os,
                           const std::vector<std::pair<std::string, spectra::IntervalSet>>& rows,
                           double e_lo, double e_hi, const Provenance& prov) {
    const double W = 900.0, row_h = 48.0, pad = 70.0;
    const double H = rows.size() * row_h + 40.0;
    auto xmap = [&](double e) { return pad + (e - e_lo) / (e_hi - e_lo) * (W - pad - 20.0); };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n";
    os << "<!-- command: " << prov.command << " config_hash: " << prov.config_hash
       << " version: " << prov.version << " -->\n";
    int irow = 0;
    for (const auto& [label, set] : rows) {
        double y = 20.0 + irow * row_h;
        os << "<text x=\"8\" y=\"" << y + 20.0 << "\" font-size=\"13\">" << label << "</text>\n";
        for (const auto& iv : set.intervals()) {
            double x0 = xmap(std::max(iv.lo, e_lo));
            double x1 = xmap(std::min(iv.hi, e_hi));
            os << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\""
               << std::max(1.0, x1 - x0) << "\" height=\"28\" fill=\"#4477aa\"/>\n";
        }
        ++irow;
    }
    os << "<line x1=\"" << xmap(e_lo) << "\" y1=\"" << H - 14.0 << "\" x2=\"" << xmap(e_hi)
       << "\" y2=\"" << H - 14.0 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << xmap(e_lo) << "\" y=\"" << H - 2.0 << "\" font-size=\"11\">"
       << fmt_double(e_lo) << "</text>\n";
    os << "<text x=\"" << xmap(e_hi) - 30.0 << "\" y=\"" << H - 2.0 << "\" font-size=\"11\">"
       << fmt_double(e_hi) << "</text>\n";
    os << "</svg>\n";
}

inline void write_curve_svg(std::ostream& os, const std::vector<double>& xs,
                            const std::vector<std::vector<double>>& curves,
                            const std::vector<std::string>& labels, const Provenance& prov) {
    const double W = 900.0, H = 420.0, pad = 60.0;
    double xmin = xs.front(), xmax = xs.back();
    double ymin = 1e300, ymax = -1e300;
    for (const auto& c : curves)
        for (double v : c) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (ymax == ymin) ymax = ymin + 1.0;
    auto xmap = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (W - pad - 20.0); };
    auto ymap = [&](double y) {
        return H - pad - (y - ymin) / (ymax - ymin) * (H - pad - 20.0);
    };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n";
    os << "<!-- command: " << prov.command << " config_hash: " << prov.config_hash
       << " version: " << prov.version << " -->\n";
    const char* colors[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44"};
    for (std::size_t c = 0; c < curves.size(); ++c) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[c % 4] << "\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i)
            os << xmap(xs[i]) << "," << ymap(curves[c][i]) << " ";
        os << "\"/>\n";
        os << "<text x=\"" << W - 160.0 << "\" y=\"" << 24.0 + 16.0 * c << "\" font-size=\"12\" fill=\""
           << colors[c % 4] << "\">" << labels[c] << "</text>\n";
    }
    os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - 20.0 << "\" y2=\""
       << H - pad << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << pad
       << "\" y2=\"20\" stroke=\"black\"/>\n";
    os << "</svg>\n";
}

}  // namespace delone::io
