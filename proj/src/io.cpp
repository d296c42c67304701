#include "rspcat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rspcat {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': not a number: '" + value + "'");
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << content;
}

}  // namespace

void ExperimentConfig::validate() const {
    const bool has_db = squeezing_db.has_value();
    const bool has_vs = v_s.has_value();
    const bool has_va = v_a.has_value();
    if (has_vs != has_va) {
        throw ConfigError("config: v_s and v_a must be given together");
    }
    if (has_db == has_vs) {
        throw ConfigError("config: exactly one of squeezing_db or (v_s, v_a) must be set");
    }
    if (has_vs) {
        if (!(*v_s > 0.0) || !(*v_s <= 0.5)) throw ConfigError("config field 'v_s': need 0 < v_s <= 0.5");
        if (!(*v_a >= 0.5)) throw ConfigError("config field 'v_a': need v_a >= 0.5");
        if (*v_s * *v_a < 0.25 - 1e-12) throw ConfigError("config: v_s*v_a >= 1/4 required");
    } else if (!(*squeezing_db >= 0.0)) {
        throw ConfigError("config field 'squeezing_db': must be >= 0");
    }
    if (eta_a < 0.0 || eta_a > 1.0) throw ConfigError("config field 'eta_a': must lie in [0, 1]");
    if (eta_b < 0.0 || eta_b > 1.0) throw ConfigError("config field 'eta_b': must lie in [0, 1]");
    if (n_subtract < 1) throw ConfigError("config field 'n_subtract': must be >= 1");
    if (window_dx < 0.0) throw ConfigError("config field 'window_dx': must be >= 0");
    if (cutoff && *cutoff < 2) throw ConfigError("config field 'cutoff': must be >= 2");
    if (!(grid_extent > 0.0)) throw ConfigError("config field 'grid_extent': must be > 0");
    if (grid_points < 3) throw ConfigError("config field 'grid_points': must be >= 3");
    if (click_rate_hz && !(*click_rate_hz >= 0.0)) {
        throw ConfigError("config field 'click_rate_hz': must be >= 0");
    }
}

std::pair<double, double> ExperimentConfig::source_variances() const {
    if (squeezing_db) {
        const double vs = 0.5 * std::pow(10.0, -*squeezing_db / 10.0);
        return {vs, 0.25 / vs};
    }
    return {*v_s, *v_a};
}

int ExperimentConfig::resolve_cutoff() const {
    if (cutoff) return *cutoff;
    const auto [vs, va] = source_variances();
    const double s_db = -10.0 * std::log10(2.0 * vs);
    return s_db <= 4.0 ? 40 : 80;
}

bool ExperimentConfig::pure_lossless() const {
    const auto [vs, va] = source_variances();
    return eta_a == 1.0 && eta_b == 1.0 && std::abs(vs * va - 0.25) < 1e-12;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "squeezing_db") {
            cfg.squeezing_db = parse_number(key, value);
        } else if (key == "v_s") {
            cfg.v_s = parse_number(key, value);
        } else if (key == "v_a") {
            cfg.v_a = parse_number(key, value);
        } else if (key == "eta_a") {
            cfg.eta_a = parse_number(key, value);
        } else if (key == "eta_b") {
            cfg.eta_b = parse_number(key, value);
        } else if (key == "n_subtract") {
            cfg.n_subtract = static_cast<int>(parse_number(key, value));
        } else if (key == "theta_rad") {
            cfg.theta_rad = parse_number(key, value);
        } else if (key == "window_dx") {
            cfg.window_dx = parse_number(key, value);
        } else if (key == "cutoff") {
            cfg.cutoff = static_cast<int>(parse_number(key, value));
        } else if (key == "grid_extent") {
            cfg.grid_extent = parse_number(key, value);
        } else if (key == "grid_points") {
            cfg.grid_points = static_cast<int>(parse_number(key, value));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_number(key, value));
        } else if (key == "click_rate_hz") {
            cfg.click_rate_hz = parse_number(key, value);
        } else {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key
                              + "'");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    if (cfg.squeezing_db) out << "squeezing_db = " << format_double(*cfg.squeezing_db) << "\n";
    if (cfg.v_s) out << "v_s = " << format_double(*cfg.v_s) << "\n";
    if (cfg.v_a) out << "v_a = " << format_double(*cfg.v_a) << "\n";
    out << "eta_a = " << format_double(cfg.eta_a) << "\n";
    out << "eta_b = " << format_double(cfg.eta_b) << "\n";
    out << "n_subtract = " << cfg.n_subtract << "\n";
    out << "theta_rad = " << format_double(cfg.theta_rad) << "\n";
    out << "window_dx = " << format_double(cfg.window_dx) << "\n";
    if (cfg.cutoff) out << "cutoff = " << *cfg.cutoff << "\n";
    out << "grid_extent = " << format_double(cfg.grid_extent) << "\n";
    out << "grid_points = " << cfg.grid_points << "\n";
    out << "seed = " << cfg.seed << "\n";
    if (cfg.click_rate_hz) out << "click_rate_hz = " << format_double(*cfg.click_rate_hz) << "\n";
    return out.str();
}

std::string to_csv(const CsvTable& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out << (i ? "," : "") << table.header[i];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_double(row[i]);
        }
        out << "\n";
    }
    return out.str();
}

void write_csv(const std::string& path, const CsvTable& table) {
    write_file(path, to_csv(table));
}

void write_samples_csv(const std::string& path, const std::vector<QuadratureSample>& samples) {
    CsvTable t;
    t.header = {"theta_rad", "x"};
    t.rows.reserve(samples.size());
    for (const auto& s : samples) t.rows.push_back({s.theta, s.x});
    write_csv(path, t);
}

std::vector<QuadratureSample> read_samples_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open samples CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
    {
        std::istringstream hdr(trim(line));
        std::string a, b;
        std::getline(hdr, a, ',');
        std::getline(hdr, b, ',');
        if (trim(a) != "theta_rad") {
            throw ConfigError(path + " line 1: expected column header 'theta_rad'");
        }
        if (trim(b) != "x") throw ConfigError(path + " line 1: expected column header 'x'");
    }
    std::vector<QuadratureSample> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b;
        std::getline(row, a, ',');
        if (!std::getline(row, b, ',')) {
            throw ConfigError(path + " line " + std::to_string(lineno) + ": expected two columns");
        }
        try {
            out.push_back({std::stod(a), std::stod(b)});
        } catch (const std::exception&) {
            throw ConfigError(path + " line " + std::to_string(lineno) + ": bad number");
        }
        if (!std::isfinite(out.back().theta) || !std::isfinite(out.back().x)) {
            throw ConfigError(path + " line " + std::to_string(lineno) + ": non-finite value");
        }
    }
    return out;
}

void write_density_csv(const std::string& path, const DensityMatrix& rho) {
    std::ostringstream out;
    out << "m,n,re,im\n";
    for (int m = 0; m <= rho.cutoff(); ++m)
        for (int n = 0; n <= rho.cutoff(); ++n) {
            out << m << "," << n << "," << format_double(rho.elems(m, n).real()) << ","
                << format_double(rho.elems(m, n).imag()) << "\n";
        }
    write_file(path, out.str());
}

void write_wigner_csv(const std::string& path, const WignerGrid& grid) {
    std::ostringstream out;
    out << "x,p,W\n";
    for (Eigen::Index i = 0; i < grid.xs.size(); ++i)
        for (Eigen::Index j = 0; j < grid.ps.size(); ++j) {
            out << format_double(grid.xs[i]) << "," << format_double(grid.ps[j]) << ","
                << format_double(grid.values(i, j)) << "\n";
        }
    write_file(path, out.str());
}

void write_wigner_binary(const std::string& path, const WignerGrid& grid) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << grid.xs.size() << "\n" << grid.ps.size() << "\n"
        << format_double(grid.xs[grid.xs.size() - 1]) << "\n";
    // Row-major over x; doubles are written in host order, which is
    // little-endian on every supported target.
    for (Eigen::Index i = 0; i < grid.xs.size(); ++i)
        for (Eigen::Index j = 0; j < grid.ps.size(); ++j) {
            const double v = grid.values(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
}

}  // namespace rspcat
