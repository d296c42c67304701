#ifndef RSPCAT_IO_HPP
#define RSPCAT_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "rspcat/analysis.hpp"
#include "rspcat/tomography.hpp"
#include "rspcat/types.hpp"

namespace rspcat {

struct ConfigError : Error {
    using Error::Error;
};

/// Flat key-value experiment description. Exactly one of squeezing_db or the
/// (v_s, v_a) pair must be set.
struct ExperimentConfig {
    std::optional<double> squeezing_db;
    std::optional<double> v_s;
    std::optional<double> v_a;
    double eta_a = 1.0;
    double eta_b = 1.0;
    int n_subtract = 1;
    double theta_rad = 1.5707963267948966;  // pi/2: phase quadrature
    double window_dx = 0.0;
    std::optional<int> cutoff;  // default depends on squeezing, see resolve_cutoff()
    double grid_extent = 5.0;
    int grid_points = 201;
    std::uint64_t seed = 12345;
    std::optional<double> click_rate_hz;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    /// Source variances: (V_s, V_a) as given, or the pure pair for squeezing_db.
    std::pair<double, double> source_variances() const;

    /// N_c = 40 up to 4 dB, 80 above, unless set explicitly.
    int resolve_cutoff() const;

    bool pure_lossless() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// 17-significant-digit float formatting used by every CSV writer.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);

/// Quadrature samples round-trip through CSV with columns (theta_rad, x).
void write_samples_csv(const std::string& path, const std::vector<QuadratureSample>& samples);
std::vector<QuadratureSample> read_samples_csv(const std::string& path);

/// Density matrix as CSV rows (m, n, re, im).
void write_density_csv(const std::string& path, const DensityMatrix& rho);

/// Wigner grid as CSV rows (x, p, W), x-major.
void write_wigner_csv(const std::string& path, const WignerGrid& grid);

/// Packed form: three text header lines (nx, ny, extent) followed by
/// little-endian doubles, row-major over x.
void write_wigner_binary(const std::string& path, const WignerGrid& grid);

}  // namespace rspcat

#endif
