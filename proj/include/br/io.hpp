#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "br/grid.hpp"
#include "br/smoothness.hpp"
#include "br/spectral.hpp"

namespace br::io {

// 12 significant digits, C locale, '.' decimal separator. The fixed width of
// the printed form is what makes repeated runs byte-identical.
std::string format_number(double v);

// 64-bit FNV-1a of the canonical text, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

// First line of every emitted file: "# config <hash> seed <seed>".
struct FileStamp {
    std::string config_hash = "0000000000000000";
    std::uint64_t seed = 0;
};

// Creates parent directories; throws io_failure when the file cannot be
// written. The low-level primitive the CSV writers and the JSON emission
// share.
void write_text(const std::filesystem::path& path, const std::string& body);
std::string read_text(const std::filesystem::path& path);

// Stamp line, then "# <json {dims, resolution}>", then a "value" column of
// the row-major samples.
void write_grid_csv(const std::filesystem::path& path, const GridFunction& f, const FileStamp& stamp);
GridFunction read_grid_csv(const std::filesystem::path& path);

// Stamp line, then header k1..kd,re,im, then one row per coefficient of the
// degree box in flat (row-major) order.
void write_poly_csv(const std::filesystem::path& path, const SpectralPolynomial& T,
                    const FileStamp& stamp);
SpectralPolynomial read_poly_csv(const std::filesystem::path& path);

// Two named numeric columns: transform sweeps (y, value), expansion
// coefficients (nu, a_nu), error-versus-degree tables, ...
void write_pairs_csv(const std::filesystem::path& path, const std::string& col_a,
                     const std::string& col_b, std::span<const std::pair<double, double>> rows,
                     const FileStamp& stamp);

// All-numeric table under the given column names; every row must have one
// entry per column.
void write_table_csv(const std::filesystem::path& path, std::span<const std::string> columns,
                     std::span<const std::vector<double>> rows, const FileStamp& stamp);

struct NormSweepRow {
    int n = 0;
    double estimate = 0.0;
    std::string method;
    std::uint64_t seed = 0;
};

// Columns n,estimate,method,seed.
void write_norm_sweep_csv(const std::filesystem::path& path, std::span<const NormSweepRow> rows,
                          const FileStamp& stamp);

// Columns n,error_means,error_family,realization,modulus plus the ratio
// columns means_over_realization, modulus_over_realization,
// family_over_means (0 when the denominator vanishes).
void write_equivalence_csv(const std::filesystem::path& path, const EquivalenceReport& rep,
                           const FileStamp& stamp);

struct RegionRasterRow {
    double inv_p = 0.0;
    double delta = 0.0;
    std::string label;
};

// Columns inv_p,delta,label.
void write_region_raster_csv(const std::filesystem::path& path, std::span<const RegionRasterRow> rows,
                             const FileStamp& stamp);

}  // namespace br::io
