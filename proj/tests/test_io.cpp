#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "br/io.hpp"
#include "br/spectral.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace br;

namespace {

std::filesystem::path scratch_dir() {
    static const std::filesystem::path dir = [] {
        std::filesystem::path p =
            std::filesystem::temp_directory_path() / "br_io_tests";
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
        return p;
    }();
    return dir;
}

}  // namespace

TEST_CASE("number formatting: 12 significant digits, C locale, no exponent surprises") {
    CHECK(io::format_number(0.0) == "0");
    CHECK(io::format_number(1.0) == "1");
    CHECK(io::format_number(0.25) == "0.25");
    CHECK(io::format_number(-0.5) == "-0.5");
    CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(io::format_number(two_pi) == "6.28318530718");
    CHECK(io::format_number(1e-9) == "1e-09");
    CHECK(io::format_number(1.5e300) == "1.5e+300");
}

TEST_CASE("fnv1a hash: published 64-bit reference values") {
    CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(io::fnv1a_hex("foobar") == "85944171f73967e8");
    // sensitivity: one character flips the digest
    CHECK(io::fnv1a_hex("foobaz") != io::fnv1a_hex("foobar"));
}

TEST_CASE("text round trip creates parent directories; missing file throws") {
    const auto path = scratch_dir() / "nested" / "deeper" / "note.txt";
    io::write_text(path, "alpha\nbeta\n");
    CHECK(io::read_text(path) == "alpha\nbeta\n");
    CHECK_THROWS_AS(io::read_text(scratch_dir() / "absent.txt"), io_failure);
}

TEST_CASE("grid CSV round trip preserves shape and values to print precision") {
    const GridFunction f = GridFunction::sample(2, 8, [](std::span<const double> x) {
        return std::cos(x[0] + 2.0 * x[1]) + 0.25 * std::sin(x[0]);
    });
    const auto path = scratch_dir() / "grid.csv";
    io::write_grid_csv(path, f, {"deadbeefdeadbeef", 7});
    const GridFunction g = io::read_grid_csv(path);
    REQUIRE(g.dims() == 2);
    REQUIRE(g.resolution() == 8);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == doctest::Approx(f[i]).epsilon(1e-11));

    const std::string text = io::read_text(path);
    CHECK(text.rfind("# config deadbeefdeadbeef seed 7\n", 0) == 0);
    CHECK(text.find("\"dims\":2") != std::string::npos);
    CHECK(text.find("\"resolution\":8") != std::string::npos);
}

TEST_CASE("grid CSV rejects truncated bodies and broken headers") {
    const GridFunction f = GridFunction::sample(1, 4, [](std::span<const double> x) { return x[0]; });
    const auto path = scratch_dir() / "grid_bad.csv";
    io::write_grid_csv(path, f, {});
    std::string text = io::read_text(path);
    const std::size_t cut = text.rfind('\n', text.size() - 2);  // drop the last value line
    io::write_text(path, text.substr(0, cut + 1));
    CHECK_THROWS_AS(io::read_grid_csv(path), io_failure);

    io::write_text(path, "# config x seed 0\nnot json\nvalue\n1\n");
    CHECK_THROWS_AS(io::read_grid_csv(path), io_failure);
}

TEST_CASE("polynomial CSV round trip: full box, inferred degree, Hermitian data intact") {
    std::mt19937_64 rng(99u);
    const SpectralPolynomial T = brtest::random_polynomial(2, 3, rng);
    const auto path = scratch_dir() / "poly.csv";
    io::write_poly_csv(path, T, {});
    const SpectralPolynomial U = io::read_poly_csv(path);
    REQUIRE(U.dims() == 2);
    REQUIRE(U.degree() == 3);
    REQUIRE(U.box_size() == T.box_size());
    for (std::size_t i = 0; i < T.box_size(); ++i)
        CHECK(std::abs(U.coeff_flat(i) - T.coeff_flat(i)) <= 1e-11 * (1.0 + std::abs(T.coeff_flat(i))));

    // the file carries one row per box entry, including the zero corners
    const std::string text = io::read_text(path);
    std::size_t rows = 0;
    for (char c : text) rows += c == '\n';
    CHECK(rows == 2 + T.box_size());
}

TEST_CASE("polynomial CSV rejects ragged rows and out-of-ball hand edits stay excluded") {
    const auto path = scratch_dir() / "poly_bad.csv";
    io::write_text(path, "# config x seed 0\nk1,re,im\n1,0.5\n");
    CHECK_THROWS_AS(io::read_poly_csv(path), io_failure);

    // a corner entry outside the coefficient ball is a contract violation
    io::write_text(path, "# config x seed 0\nk1,k2,re,im\n3,3,1,0\n");
    CHECK_THROWS_AS(io::read_poly_csv(path), bad_config);
}

TEST_CASE("pairs and table writers emit stamped, fixed-width rows") {
    const auto path = scratch_dir() / "pairs.csv";
    const std::vector<std::pair<double, double>> rows{{1.0, 0.5}, {2.0, 0.125}};
    io::write_pairs_csv(path, "n", "error", rows, {"00ff00ff00ff00ff", 3});
    CHECK(io::read_text(path) ==
          "# config 00ff00ff00ff00ff seed 3\nn,error\n1,0.5\n2,0.125\n");

    const auto tpath = scratch_dir() / "table.csv";
    const std::vector<std::string> cols{"n", "a", "b"};
    const std::vector<std::vector<double>> trows{{1.0, 0.5, 0.25}};
    io::write_table_csv(tpath, cols, trows, {});
    CHECK(io::read_text(tpath) ==
          "# config 0000000000000000 seed 0\nn,a,b\n1,0.5,0.25\n");

    const std::vector<std::vector<double>> ragged{{1.0, 0.5}};
    CHECK_THROWS_AS(io::write_table_csv(tpath, cols, ragged, {}), io_failure);
}

TEST_CASE("norm sweep and region raster writers keep their column contracts") {
    const auto path = scratch_dir() / "sweep.csv";
    const std::vector<io::NormSweepRow> rows{{4, 1.25, "kernel-l1", 42}};
    io::write_norm_sweep_csv(path, rows, {});
    CHECK(io::read_text(path).find("n,estimate,method,seed\n4,1.25,kernel-l1,42\n") !=
          std::string::npos);

    const auto rpath = scratch_dir() / "raster.csv";
    const std::vector<io::RegionRasterRow> rrows{{0.5, 1.0, "Sigma"}, {2.0, 0.0, "Gamma"}};
    io::write_region_raster_csv(rpath, rrows, {});
    CHECK(io::read_text(rpath).find("inv_p,delta,label\n0.5,1,Sigma\n2,0,Gamma\n") !=
          std::string::npos);
}

TEST_CASE("equivalence writer: ratio columns, zero-denominator convention") {
    EquivalenceReport rep;
    rep.rows.push_back({4, 0.5, 1.0, 0.25, 2.0});
    rep.rows.push_back({8, 0.0, 0.0, 0.0, 0.0});
    const auto path = scratch_dir() / "equiv.csv";
    io::write_equivalence_csv(path, rep, {});
    const std::string text = io::read_text(path);
    CHECK(text.find("4,0.5,1,0.25,2,2,8,2\n") != std::string::npos);
    CHECK(text.find("8,0,0,0,0,0,0,0\n") != std::string::npos);
}

TEST_CASE("byte determinism: rewriting the same content produces identical files") {
    const GridFunction f = GridFunction::sample(1, 16, [](std::span<const double> x) {
        return std::sin(3.0 * x[0]) - 0.125 * std::cos(x[0]);
    });
    const auto a = scratch_dir() / "det_a.csv";
    const auto b = scratch_dir() / "det_b.csv";
    io::write_grid_csv(a, f, {"abcdabcdabcdabcd", 11});
    io::write_grid_csv(b, f, {"abcdabcdabcdabcd", 11});
    CHECK(io::read_text(a) == io::read_text(b));
}
