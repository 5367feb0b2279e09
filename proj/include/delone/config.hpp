#pragma once

// Flat key-value config files with [section] headers and '#' comments.
// Composite keys are "section.key"; values before any section header are
// plain "key".

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "delone/common.hpp"
#include "delone/experiment.hpp"

namespace delone::config {

class KeyValues {
public:
    static KeyValues parse(std::istream& is) {
        KeyValues kv;
        std::string line, section;
        while (std::getline(is, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string t = trim(line);
            if (t.empty()) continue;
            if (t.front() == '[' && t.back() == ']') {
                section = trim(t.substr(1, t.size() - 2));
                continue;
            }
            auto eq = t.find('=');
            if (eq == std::string::npos) throw parse_error("config: expected key = value: " + t);
            std::string key = trim(t.substr(0, eq));
            std::string val = trim(t.substr(eq + 1));
            if (key.empty()) throw parse_error("config: empty key");
            kv.map_[section.empty() ? key : section + "." + key] = val;
        }
        return kv;
    }

    static KeyValues parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw parse_error("cannot read config " + path);
        return parse(is);
    }

    bool has(const std::string& key) const { return map_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& dflt) const {
        auto it = map_.find(key);
        return it == map_.end() ? dflt : it->second;
    }

    double get_double(const std::string& key, double dflt) const {
        auto it = map_.find(key);
        if (it == map_.end()) return dflt;
        return to_double(it->second, key);
    }

    long get_int(const std::string& key, long dflt) const {
        auto it = map_.find(key);
        if (it == map_.end()) return dflt;
        try {
            std::size_t pos = 0;
            long v = std::stol(it->second, &pos);
            if (pos != it->second.size()) throw parse_error("config: bad integer for " + key);
            return v;
        } catch (const std::exception&) {
            throw parse_error("config: bad integer for " + key);
        }
    }

    std::vector<double> get_list(const std::string& key, std::vector<double> dflt) const {
        auto it = map_.find(key);
        if (it == map_.end()) return dflt;
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) out.push_back(to_double(tok, key));
        }
        if (out.empty()) throw parse_error("config: empty list for " + key);
        return out;
    }

    const std::map<std::string, std::string>& entries() const { return map_; }

private:
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static double to_double(const std::string& s, const std::string& key) {
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw parse_error("config: bad number for " + key);
            return v;
        } catch (const std::exception&) {
            throw parse_error("config: bad number for " + key);
        }
    }

    std::map<std::string, std::string> map_;
};

// Everything a schedule run needs; defaults reproduce the stock experiment.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    double r = 0.4;
    double R = 0.9;
    double spacing = 1.0;
    double jitter = 0.05;
    experiment::Settings settings;
    double tail_period = 1.0;  // integer-like lattice glued on outside

    static ExperimentConfig from(const KeyValues& kv) {
        ExperimentConfig c;
        c.seed = static_cast<std::uint64_t>(kv.get_int("seed", 1));
        c.r = kv.get_double("delone.r", c.r);
        c.R = kv.get_double("delone.R", c.R);
        c.spacing = kv.get_double("delone.spacing", c.spacing);
        c.jitter = kv.get_double("delone.jitter", c.jitter);
        c.tail_period = kv.get_double("delone.tail_period", c.tail_period);
        experiment::Settings& s = c.settings;
        s.schedule = kv.get_list("schedule.S", {5.0, 10.0, 20.0, 40.0});
        s.v = spectra::Potential::trapezoid_well(kv.get_double("potential.depth", -1.0),
                                                 kv.get_double("potential.half_width", 0.3),
                                                 kv.get_double("potential.shoulder", 0.05));
        s.grid_x0 = kv.get_double("grid.x0", -50.0);
        s.grid_x1 = kv.get_double("grid.x1", 50.0);
        s.grid_h = kv.get_double("grid.h", 0.05);
        s.energy_lo = kv.get_double("window.E0", 0.0);
        s.energy_hi = kv.get_double("window.E1", 2.0);
        s.delta_tol = kv.get_double("tolerances.delta_tol", 1e-3);
        s.eig_tol = kv.get_double("tolerances.eig_tol", 1e-6);
        s.pitch = kv.get_double("tolerances.pitch", 0.05);
        s.band_tol = kv.get_double("tolerances.band_tol", 1e-6);
        s.band_h = kv.get_double("grid.band_h", 0.02);
        s.band_scan = static_cast<int>(kv.get_int("grid.band_scan", 1025));
        s.xi_center = kv.get_double("state.xi_center", 0.0);
        s.xi_halfwidth = kv.get_double("state.xi_halfwidth", 1.0);
        s.validate();
        return c;
    }

    // canonical text for hashing: sorted key=value lines
    std::string canonical() const {
        std::ostringstream os;
        os << "seed=" << seed << ";r=" << fmt_double(r) << ";R=" << fmt_double(R)
           << ";spacing=" << fmt_double(spacing) << ";jitter=" << fmt_double(jitter)
           << ";tail_period=" << fmt_double(tail_period);
        const experiment::Settings& s = settings;
        os << ";schedule=";
        for (double v : s.schedule) os << fmt_double(v) << ",";
        os << ";grid=" << fmt_double(s.grid_x0) << ":" << fmt_double(s.grid_x1) << ":"
           << fmt_double(s.grid_h) << ";window=" << fmt_double(s.energy_lo) << ":"
           << fmt_double(s.energy_hi) << ";delta_tol=" << fmt_double(s.delta_tol)
           << ";eig_tol=" << fmt_double(s.eig_tol) << ";pitch=" << fmt_double(s.pitch)
           << ";band=" << fmt_double(s.band_h) << ":" << s.band_scan << ":"
           << fmt_double(s.band_tol) << ";xi=" << fmt_double(s.xi_center) << ":"
           << fmt_double(s.xi_halfwidth);
        for (const auto& [x, v] : s.v.profile)
            os << ";v=" << fmt_double(x) << ":" << fmt_double(v);
        return os.str();
    }

    std::uint64_t hash() const { return fnv1a64(canonical()); }

    // reference set wide enough for the metric truncation and the grid
    double window_radius() const {
        double need = 4.0 / settings.delta_tol;
        need = std::max(need, settings.schedule.back() + 3.0 * R + r);
        need = std::max(need, std::max(std::abs(settings.grid_x0), std::abs(settings.grid_x1)) +
                                  settings.v.half_width);
        return need + 2.0 * spacing;
    }
};

}  // namespace delone::config
