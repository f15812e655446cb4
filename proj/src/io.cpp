#include "br/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace br::io {

namespace {

using nlohmann::json;

// Splits one CSV line at commas; fields here never contain quoted commas.
std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_number(const std::string& s, const std::filesystem::path& path) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == 0) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw io_failure("malformed numeric field '" + s + "' in " + path.string());
    }
}

// Lines of the file with the trailing '\r' of CRLF input stripped.
std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::string stamp_line(const FileStamp& stamp) {
    return "# config " + stamp.config_hash + " seed " + std::to_string(stamp.seed) + "\n";
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw io_failure("cannot create directory " + path.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_failure("cannot open " + path.string() + " for writing");
    out << body;
    if (!out) throw io_failure("short write to " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_failure("cannot open " + path.string());
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

void write_grid_csv(const std::filesystem::path& path, const GridFunction& f, const FileStamp& stamp) {
    json meta;
    meta["dims"] = f.dims();
    meta["resolution"] = f.resolution();
    std::string body = stamp_line(stamp);
    body += "# " + meta.dump() + "\n";
    body += "value\n";
    for (std::size_t i = 0; i < f.size(); ++i) body += format_number(f[i]) + "\n";
    write_text(path, body);
}

GridFunction read_grid_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.size() < 3 || lines[1].rfind("# ", 0) != 0)
        throw io_failure("missing grid header in " + path.string());
    json meta;
    try {
        meta = json::parse(lines[1].substr(2));
    } catch (const json::exception&) {
        throw io_failure("malformed grid header in " + path.string());
    }
    if (!meta.contains("dims") || !meta.contains("resolution"))
        throw io_failure("grid header lacks dims/resolution in " + path.string());
    GridFunction f(meta["dims"].get<int>(), meta["resolution"].get<int>());
    if (lines.size() != 3 + f.size())
        throw io_failure("grid value count mismatch in " + path.string());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = parse_number(lines[3 + i], path);
    return f;
}

void write_poly_csv(const std::filesystem::path& path, const SpectralPolynomial& T,
                    const FileStamp& stamp) {
    std::string body = stamp_line(stamp);
    for (int a = 0; a < T.dims(); ++a) body += "k" + std::to_string(a + 1) + ",";
    body += "re,im\n";
    std::vector<int> m(static_cast<std::size_t>(T.dims()));
    for (std::size_t i = 0; i < T.box_size(); ++i) {
        T.unflatten(i, m);
        for (int v : m) body += std::to_string(v) + ",";
        const cd c = T.coeff_flat(i);
        body += format_number(c.real()) + "," + format_number(c.imag()) + "\n";
    }
    write_text(path, body);
}

SpectralPolynomial read_poly_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.size() < 2) throw io_failure("missing polynomial header in " + path.string());
    const std::vector<std::string> cols = split_fields(lines[1]);
    if (cols.size() < 3 || cols[cols.size() - 2] != "re" || cols.back() != "im")
        throw io_failure("unexpected polynomial columns in " + path.string());
    const int d = static_cast<int>(cols.size()) - 2;

    int degree = 0;
    std::vector<std::vector<int>> idx;
    std::vector<cd> coeff;
    for (std::size_t li = 2; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const std::vector<std::string> f = split_fields(lines[li]);
        if (f.size() != cols.size()) throw io_failure("ragged polynomial row in " + path.string());
        std::vector<int> m(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) {
            m[static_cast<std::size_t>(a)] =
                static_cast<int>(parse_number(f[static_cast<std::size_t>(a)], path));
            degree = std::max(degree, std::abs(m[static_cast<std::size_t>(a)]));
        }
        idx.push_back(std::move(m));
        coeff.emplace_back(parse_number(f[f.size() - 2], path), parse_number(f.back(), path));
    }
    SpectralPolynomial T(d, degree);
    for (std::size_t i = 0; i < idx.size(); ++i)
        if (coeff[i] != cd(0.0, 0.0)) T.set(idx[i], coeff[i]);
    return T;
}

void write_pairs_csv(const std::filesystem::path& path, const std::string& col_a,
                     const std::string& col_b, std::span<const std::pair<double, double>> rows,
                     const FileStamp& stamp) {
    std::string body = stamp_line(stamp);
    body += col_a + "," + col_b + "\n";
    for (const auto& [a, b] : rows) body += format_number(a) + "," + format_number(b) + "\n";
    write_text(path, body);
}

void write_table_csv(const std::filesystem::path& path, std::span<const std::string> columns,
                     std::span<const std::vector<double>> rows, const FileStamp& stamp) {
    if (columns.empty()) throw io_failure("table needs at least one column");
    std::string body = stamp_line(stamp);
    for (std::size_t c = 0; c < columns.size(); ++c)
        body += columns[c] + (c + 1 < columns.size() ? "," : "\n");
    for (const std::vector<double>& row : rows) {
        if (row.size() != columns.size())
            throw io_failure("table row width " + std::to_string(row.size()) + " does not match " +
                             std::to_string(columns.size()) + " columns");
        for (std::size_t c = 0; c < row.size(); ++c)
            body += format_number(row[c]) + (c + 1 < row.size() ? "," : "\n");
    }
    write_text(path, body);
}

void write_norm_sweep_csv(const std::filesystem::path& path, std::span<const NormSweepRow> rows,
                          const FileStamp& stamp) {
    std::string body = stamp_line(stamp);
    body += "n,estimate,method,seed\n";
    for (const NormSweepRow& r : rows)
        body += std::to_string(r.n) + "," + format_number(r.estimate) + "," + r.method + "," +
                std::to_string(r.seed) + "\n";
    write_text(path, body);
}

void write_equivalence_csv(const std::filesystem::path& path, const EquivalenceReport& rep,
                           const FileStamp& stamp) {
    std::string body = stamp_line(stamp);
    body +=
        "n,error_means,error_family,realization,modulus,"
        "means_over_realization,modulus_over_realization,family_over_means\n";
    auto ratio = [](double num, double den) { return den != 0.0 ? num / den : 0.0; };
    for (const EquivalenceRow& r : rep.rows) {
        body += std::to_string(r.n) + "," + format_number(r.err_means) + "," +
                format_number(r.err_family) + "," + format_number(r.realization) + "," +
                format_number(r.modulus) + "," + format_number(ratio(r.err_means, r.realization)) +
                "," + format_number(ratio(r.modulus, r.realization)) + "," +
                format_number(ratio(r.err_family, r.err_means)) + "\n";
    }
    write_text(path, body);
}

void write_region_raster_csv(const std::filesystem::path& path,
                             std::span<const RegionRasterRow> rows, const FileStamp& stamp) {
    std::string body = stamp_line(stamp);
    body += "inv_p,delta,label\n";
    for (const RegionRasterRow& r : rows)
        body += format_number(r.inv_p) + "," + format_number(r.delta) + "," + r.label + "\n";
    write_text(path, body);
}

}  // namespace br::io
