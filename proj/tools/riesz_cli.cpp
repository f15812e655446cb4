// Experiment driver: parameter sweeps over the summability operators with
// CSV/JSON emission and a reproducibility manifest per run.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "br/io.hpp"
#include "br/kernels.hpp"
#include "br/operators.hpp"
#include "br/radial.hpp"
#include "br/regions.hpp"
#include "br/riesz.hpp"
#include "br/smoothness.hpp"
#include "br/spectral.hpp"

namespace {

using json = nlohmann::json;
using namespace br;

struct Config {
    std::string experiment;
    int d = 1;
    std::vector<double> beta{2.0};
    std::vector<double> delta{1.0};
    std::vector<double> p{2.0};  // infinity kept as the IEEE value
    std::vector<int> n{4, 8, 16, 32};
    int resolution = 0;  // 0 = auto (quadrature-exact for the working degree)
    std::uint64_t seed = 20260819ull;
    std::string out;
    std::map<std::string, double> tol;
    json function = json::object();
    bool override_region = false;
    std::string operator_kind = "means";  // norms: means | family
    std::vector<std::vector<double>> lambda;  // family shifts; empty = seeded
    int norm_samples = 0;                     // 0 = library default
    double y_lo = 0.5, y_hi = 40.0;
    int y_points = 200;
    double inv_p_max = 2.0, delta_max = 2.0;
    int raster_steps = 41;
};

// ---------------------------------------------------------------- config ---

std::vector<double> number_list(const json& v, const char* key) {
    std::vector<double> out;
    auto one = [&](const json& e) {
        if (e.is_string() && (e == "inf" || e == "Inf" || e == "infinity"))
            out.push_back(std::numeric_limits<double>::infinity());
        else if (e.is_number())
            out.push_back(e.get<double>());
        else
            throw bad_config(std::string("config key '") + key + "' wants numbers or \"inf\"");
    };
    if (v.is_array())
        for (const json& e : v) one(e);
    else
        one(v);
    if (out.empty()) throw bad_config(std::string("config key '") + key + "' must not be empty");
    return out;
}

std::vector<int> int_list(const json& v, const char* key) {
    std::vector<int> out;
    for (double x : number_list(v, key)) {
        if (!(x == std::floor(x)) || std::abs(x) > 1e9)
            throw bad_config(std::string("config key '") + key + "' wants integers");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

Config config_from_json(const json& j) {
    static const char* known[] = {"experiment", "d",        "beta",        "delta",
                                  "p",          "n",        "resolution",  "seed",
                                  "out",        "tol",      "function",    "override_region",
                                  "operator",   "lambda",   "norm_samples", "y_lo",
                                  "y_hi",       "y_points", "inv_p_max",   "delta_max",
                                  "raster_steps"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw bad_config("unknown config key '" + it.key() + "'");
    }
    Config c;
    try {
        if (j.contains("d")) c.d = j["d"].get<int>();
        if (j.contains("beta")) c.beta = number_list(j["beta"], "beta");
        if (j.contains("delta")) c.delta = number_list(j["delta"], "delta");
        if (j.contains("p")) c.p = number_list(j["p"], "p");
        if (j.contains("n")) c.n = int_list(j["n"], "n");
        if (j.contains("resolution")) {
            const json& r = j["resolution"];
            if (r.is_string() && r == "auto")
                c.resolution = 0;
            else if (r.is_number_integer() && r.get<int>() > 0)
                c.resolution = r.get<int>();
            else
                throw bad_config("config key 'resolution' wants \"auto\" or a positive integer");
        }
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("out")) c.out = j["out"].get<std::string>();
        if (j.contains("tol"))
            for (auto it = j["tol"].begin(); it != j["tol"].end(); ++it)
                c.tol[it.key()] = it.value().get<double>();
        if (j.contains("function")) c.function = j["function"];
        if (j.contains("override_region")) c.override_region = j["override_region"].get<bool>();
        if (j.contains("operator")) c.operator_kind = j["operator"].get<std::string>();
        if (j.contains("lambda"))
            for (const json& row : j["lambda"])
                c.lambda.push_back(number_list(row, "lambda"));
        if (j.contains("norm_samples")) c.norm_samples = j["norm_samples"].get<int>();
        if (j.contains("y_lo")) c.y_lo = j["y_lo"].get<double>();
        if (j.contains("y_hi")) c.y_hi = j["y_hi"].get<double>();
        if (j.contains("y_points")) c.y_points = j["y_points"].get<int>();
        if (j.contains("inv_p_max")) c.inv_p_max = j["inv_p_max"].get<double>();
        if (j.contains("delta_max")) c.delta_max = j["delta_max"].get<double>();
        if (j.contains("raster_steps")) c.raster_steps = j["raster_steps"].get<int>();
    } catch (const json::exception& e) {
        throw bad_config(std::string("malformed config value: ") + e.what());
    }
    if (c.d < 1 || c.d > 4) throw bad_config("d must be in [1, 4]");
    if (c.operator_kind != "means" && c.operator_kind != "family")
        throw bad_config("operator must be \"means\" or \"family\"");
    for (int n : c.n)
        if (n < 1) throw bad_config("degrees n must be positive");
    return c;
}

json config_to_json(const Config& c) {
    json j;
    j["experiment"] = c.experiment;
    j["d"] = c.d;
    j["beta"] = c.beta;
    j["delta"] = c.delta;
    json ps = json::array();
    for (double v : c.p)
        if (std::isinf(v))
            ps.push_back("inf");
        else
            ps.push_back(v);
    j["p"] = ps;
    j["n"] = c.n;
    j["resolution"] = c.resolution == 0 ? json("auto") : json(c.resolution);
    j["seed"] = c.seed;
    j["out"] = c.out;
    j["tol"] = c.tol;
    j["function"] = c.function.empty() ? json({{"type", "cosine"}, {"mode", 1}, {"amp", 1.0}})
                                       : c.function;
    j["override_region"] = c.override_region;
    j["operator"] = c.operator_kind;
    j["lambda"] = c.lambda.empty() ? json("auto") : json(c.lambda);
    j["norm_samples"] = c.norm_samples;
    j["y_lo"] = c.y_lo;
    j["y_hi"] = c.y_hi;
    j["y_points"] = c.y_points;
    j["inv_p_max"] = c.inv_p_max;
    j["delta_max"] = c.delta_max;
    j["raster_steps"] = c.raster_steps;
    return j;
}

double tol_or(const Config& c, const std::string& name, double fallback) {
    const auto it = c.tol.find(name);
    return it == c.tol.end() ? fallback : it->second;
}

Exponent exponent_of(double pv) {
    return std::isinf(pv) ? Exponent::infinity() : Exponent(pv);
}

std::string num_tag(double v) { return std::isinf(v) ? "inf" : io::format_number(v); }

int resolution_for(const Config& c, int degree) {
    return c.resolution == 0 ? quad_resolution(degree) : c.resolution;
}

// ------------------------------------------------------- input functions ---

SpectralPolynomial build_function(const Config& cfg) {
    json fj = cfg.function;
    if (fj.empty()) fj = {{"type", "cosine"}, {"mode", 1}, {"amp", 1.0}};
    try {
        const std::string type = fj.value("type", "cosine");
        if (type == "cosine") {
            const int mode = fj.value("mode", 1);
            const double amp = fj.value("amp", 1.0);
            if (mode < 1) throw bad_config("cosine mode must be positive");
            SpectralPolynomial T(cfg.d, mode);
            std::vector<int> m(static_cast<std::size_t>(cfg.d), 0);
            m[0] = mode;
            T.set(m, cd(0.5 * amp, 0.0));
            m[0] = -mode;
            T.set(m, cd(0.5 * amp, 0.0));
            return T;
        }
        if (type == "lacunary") {
            const int levels = fj.value("levels", 5);
            const double rate = fj.value("rate", 1.5);
            const int base = fj.value("base", 2);
            if (levels < 0 || base < 2 || !(rate > 0.0))
                throw bad_config("lacunary wants levels >= 0, base >= 2, rate > 0");
            double top = std::pow(base, levels);
            if (top > 4096.0) throw bad_config("lacunary top mode exceeds 4096");
            SpectralPolynomial T(cfg.d, static_cast<int>(top));
            std::vector<int> m(static_cast<std::size_t>(cfg.d), 0);
            for (int jj = 0; jj <= levels; ++jj) {
                const double a = 0.5 * std::pow(static_cast<double>(base), -rate * jj);
                const int mode = static_cast<int>(std::pow(base, jj));
                m[0] = mode;
                T.set(m, cd(a, 0.0));
                m[0] = -mode;
                T.set(m, cd(a, 0.0));
            }
            return T;
        }
        if (type == "random") {
            const int degree = fj.value("degree", 8);
            if (degree < 0) throw bad_config("random degree must be nonnegative");
            std::mt19937_64 rng(cfg.seed);
            std::normal_distribution<double> g(0.0, 1.0);
            SpectralPolynomial T(cfg.d, degree);
            const std::size_t total = T.box_size();
            std::vector<int> m(static_cast<std::size_t>(cfg.d));
            for (std::size_t i = 0; i < total; ++i) {
                const std::size_t mirror = total - 1 - i;
                if (i > mirror) continue;
                T.unflatten(i, m);
                if (!T.in_ball(m)) continue;
                if (i == mirror) {
                    T.raw()[i] = cd(g(rng), 0.0);
                } else {
                    const cd v(g(rng), g(rng));
                    T.raw()[i] = v;
                    T.raw()[mirror] = std::conj(v);
                }
            }
            return T;
        }
        if (type == "constant") {
            SpectralPolynomial T(cfg.d, 0);
            T.raw()[0] = cd(fj.value("value", 1.0), 0.0);
            return T;
        }
        throw bad_config("unknown function type '" + type + "'");
    } catch (const json::exception& e) {
        throw bad_config(std::string("malformed function descriptor: ") + e.what());
    }
}

std::vector<std::vector<double>> family_shifts(const Config& cfg) {
    if (!cfg.lambda.empty()) {
        for (const auto& row : cfg.lambda)
            if (static_cast<int>(row.size()) != cfg.d)
                throw bad_config("each lambda row needs d entries");
        return cfg.lambda;
    }
    std::mt19937_64 rng(cfg.seed ^ 0x5bf0a8b1ull);
    std::uniform_real_distribution<double> u(0.0, two_pi);
    std::vector<std::vector<double>> out(3, std::vector<double>(static_cast<std::size_t>(cfg.d)));
    for (auto& row : out)
        for (double& x : row) x = u(rng);
    return out;
}

// -------------------------------------------------------------- manifest ---

struct Manifest {
    json config;
    std::string hash;
    std::vector<std::string> outputs;
    json checks = json::array();

    void add_check(const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    }
    bool all_pass() const {
        for (const json& c : checks)
            if (!c["pass"].get<bool>()) return false;
        return true;
    }
};

std::filesystem::path target(const Config& cfg, Manifest& man, const std::string& name) {
    man.outputs.push_back(name);
    return std::filesystem::path(cfg.out) / name;
}

io::FileStamp stamp_of(const Config& cfg, const Manifest& man) {
    return io::FileStamp{man.hash, cfg.seed};
}

double error_norm(const SpectralPolynomial& f, const SpectralPolynomial& g, int N, Exponent p) {
    GridFunction a = synthesize(f, N);
    const GridFunction b = synthesize(g, N);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return lp_norm(a, p);
}

// Max coefficient difference over the union box; indices outside the smaller
// box count as zero.
double coeff_gap(const SpectralPolynomial& a, const SpectralPolynomial& b) {
    if (a.dims() != b.dims()) throw bad_config("coefficient dimensions disagree");
    const SpectralPolynomial& big = a.degree() >= b.degree() ? a : b;
    const SpectralPolynomial& small = a.degree() >= b.degree() ? b : a;
    std::vector<int> m(static_cast<std::size_t>(big.dims()));
    double gap = 0.0;
    for (std::size_t i = 0; i < big.box_size(); ++i) {
        big.unflatten(i, m);
        bool inside = true;
        for (int v : m) inside = inside && std::abs(v) <= small.degree();
        const cd other = inside ? small.at(m) : cd(0.0, 0.0);
        gap = std::max(gap, std::abs(big.coeff_flat(i) - other));
    }
    return gap;
}

Symbol symbol_for(double beta, double delta) {
    return delta == 0.0 ? unit_ball_indicator() : RieszSymbol(beta, delta).to_symbol();
}

// ------------------------------------------------------------ subcommands ---

void cmd_kernel(const Config& cfg, Manifest& man) {
    const io::FileStamp st = stamp_of(cfg, man);
    const int terms = static_cast<int>(tol_or(cfg, "expansion_terms", 40));
    for (double b : cfg.beta) {
        for (double dl : cfg.delta) {
            const RieszSymbol s(b, dl);
            const std::string suffix = "_b" + num_tag(b) + "_dl" + num_tag(dl);

            const ExpansionCoefficients ex = expansion_coefficients(s, terms);
            std::vector<std::pair<double, double>> rows;
            for (std::size_t nu = 0; nu < ex.a.size(); ++nu)
                rows.emplace_back(static_cast<double>(nu), ex.a[nu]);
            io::write_pairs_csv(target(cfg, man, "expansion" + suffix + ".csv"), "nu", "a_nu", rows,
                                st);
            const double a0_want = std::pow(b / 2.0, dl);
            const double a0_err = std::abs(ex.a[0] - a0_want);
            man.add_check("expansion-a0" + suffix, a0_err <= 1e-12,
                          "|a_0 - (beta/2)^delta| = " + io::format_number(a0_err));

            double center_err = 0.0;
            for (int n : cfg.n) {
                const SpectralPolynomial K = kernel_coefficients(n, s, cfg.d);
                const std::string nk = suffix + "_n" + std::to_string(n) + "_d" +
                                       std::to_string(cfg.d);
                io::write_poly_csv(target(cfg, man, "kernel" + nk + ".csv"), K, st);
                io::write_grid_csv(target(cfg, man, "kernel_grid" + nk + ".csv"),
                                   synthesize(K, resolution_for(cfg, n)), st);
                const std::vector<int> zero(static_cast<std::size_t>(cfg.d), 0);
                center_err = std::max(center_err, std::abs(K.at(zero) - cd(1.0, 0.0)));
            }
            man.add_check("kernel-center" + suffix, center_err <= 1e-12,
                          "max |c_0 - 1| = " + io::format_number(center_err));
        }
    }
}

void cmd_means(const Config& cfg, Manifest& man) {
    const io::FileStamp st = stamp_of(cfg, man);
    const SpectralPolynomial f = build_function(cfg);
    int max_n = 0;
    for (int n : cfg.n) max_n = std::max(max_n, n);
    const int N = resolution_for(cfg, std::max(f.degree(), max_n));
    for (double b : cfg.beta) {
        for (double dl : cfg.delta) {
            SpectralPolynomial last(cfg.d, 0);
            for (double pv : cfg.p) {
                const Exponent p = exponent_of(pv);
                std::vector<std::pair<double, double>> rows;
                bool finite = true;
                for (int n : cfg.n) {
                    const MeansSpec ms(n, cfg.d, symbol_for(b, dl));
                    last = apply_means(f, ms);
                    const double err = error_norm(f, last, N, p);
                    finite = finite && std::isfinite(err) && err >= 0.0;
                    rows.emplace_back(static_cast<double>(n), err);
                }
                const std::string suffix =
                    "_b" + num_tag(b) + "_dl" + num_tag(dl) + "_p" + num_tag(pv);
                io::write_pairs_csv(target(cfg, man, "means_error" + suffix + ".csv"), "n", "error",
                                    rows, st);
                man.add_check("means-finite" + suffix, finite, "all errors finite and nonnegative");
            }
            io::write_poly_csv(target(cfg, man, "means_poly_b" + num_tag(b) + "_dl" + num_tag(dl) +
                                                   "_n" + std::to_string(cfg.n.back()) + ".csv"),
                               last, st);
        }
    }
}

void cmd_family(const Config& cfg, Manifest& man) {
    const io::FileStamp st = stamp_of(cfg, man);
    const SpectralPolynomial f = build_function(cfg);
    const std::vector<std::vector<double>> shifts = family_shifts(cfg);
    const double scale = lp_norm(f, Exponent::infinity());
    const double gap_tol = tol_or(cfg, "family_gap", 1e-9);
    for (double b : cfg.beta) {
        for (double dl : cfg.delta) {
            const std::string suffix = "_b" + num_tag(b) + "_dl" + num_tag(dl);
            std::vector<std::pair<double, double>> rows;
            double worst = 0.0;
            SpectralPolynomial sample_out(cfg.d, 0);
            for (int n : cfg.n) {
                const Symbol sym = symbol_for(b, dl);
                const SpectralPolynomial B = apply_means(f, MeansSpec(n, cfg.d, sym));
                double gap = 0.0;
                for (const auto& lam : shifts) {
                    const SpectralPolynomial A = apply_family(f, FamilySpec(n, cfg.d, sym, lam));
                    gap = std::max(gap, coeff_gap(A, B));
                    if (n == cfg.n.back() && &lam == &shifts.front()) sample_out = A;
                }
                worst = std::max(worst, gap);
                rows.emplace_back(static_cast<double>(n), gap);
            }
            io::write_pairs_csv(target(cfg, man, "family_gap" + suffix + ".csv"), "n", "max_gap",
                                rows, st);
            io::write_poly_csv(target(cfg, man, "family_poly" + suffix + ".csv"), sample_out, st);
            man.add_check("family-reproduces-means" + suffix, worst <= gap_tol * std::max(scale, 1.0),
                          "max coefficient gap " + io::format_number(worst));
        }
    }
}

void cmd_norms(const Config& cfg, Manifest& man) {
    const io::FileStamp st = stamp_of(cfg, man);
    json verdicts = json::array();
    for (double b : cfg.beta) {
        for (double dl : cfg.delta) {
            for (double pv : cfg.p) {
                const Exponent p = exponent_of(pv);
                std::vector<io::NormSweepRow> rows;
                std::vector<double> values;
                for (int n : cfg.n) {
                    const MeansSpec ms(n, cfg.d, symbol_for(b, dl));
                    NormEstimate est;
                    if (cfg.operator_kind == "means")
                        est = cfg.norm_samples > 0 ? operator_norm(ms, p, cfg.norm_samples, cfg.seed)
                                                   : operator_norm(ms, p, 48, cfg.seed);
                    else
                        est = cfg.norm_samples > 0 ? family_norm(ms, p, cfg.norm_samples, cfg.seed)
                                                   : family_norm(ms, p, 16, cfg.seed);
                    rows.push_back({n, est.value, est.method, est.seed});
                    values.push_back(est.value);
                }
                const std::string suffix =
                    "_b" + num_tag(b) + "_dl" + num_tag(dl) + "_p" + num_tag(pv);
                io::write_norm_sweep_csv(
                    target(cfg, man, "norms_" + cfg.operator_kind + suffix + ".csv"), rows, st);

                const ConvergenceReport probe = convergence_probe(values, cfg.n);
                const RegionPoint pt(p.inv(), dl, cfg.d);
                const Verdict v = verdict(pt, b, p);
                const Convergence expected = cfg.operator_kind == "means" ? v.means_converge
                                                                          : v.family_converge;
                json rec;
                rec["beta"] = b;
                rec["delta"] = dl;
                rec["p"] = std::isinf(pv) ? json("inf") : json(pv);
                rec["operator"] = cfg.operator_kind;
                rec["region"] = to_string(v.region);
                rec["expected"] = to_string(expected);
                rec["verdict"] = probe.verdict;
                rec["slope"] = probe.slope;
                rec["residual"] = probe.residual;
                rec["norms"] = probe.norms;
                verdicts.push_back(rec);

                if (expected == Convergence::yes || expected == Convergence::no) {
                    const std::string want =
                        expected == Convergence::yes ? "bounded" : "growing";
                    const bool ok =
                        probe.verdict == want || probe.verdict == "inconclusive";
                    man.add_check("norms-verdict" + suffix, ok,
                                  "expected " + want + ", measured " + probe.verdict +
                                      " (slope " + io::format_number(probe.slope) + ")");
                }
            }
        }
    }
    io::write_text(target(cfg, man, "norm_verdicts.json"), verdicts.dump(2) + "\n");
}

void cmd_kfun(const Config& cfg, Manifest& man) {
    const io::FileStamp st = stamp_of(cfg, man);
    const SpectralPolynomial f = build_function(cfg);
    int max_n = 0;
    for (int n : cfg.n) max_n = std::max(max_n, n);
    const GridFunction fg = synthesize(f, resolution_for(cfg, std::max(f.degree(), max_n)));
    json winners = json::array();
    for (double b : cfg.beta) {
        for (double pv : cfg.p) {
            const Exponent p = exponent_of(pv);
            const std::string suffix = "_b" + num_tag(b) + "_p" + num_tag(pv);
            const std::vector<std::string> cols{"n", "realization", "approx_term", "smooth_term"};
            std::vector<std::vector<double>> rows;
            std::vector<std::pair<double, double>> upper;
            bool ok = true;
            const bool has_k = p.is_inf() || p.value() >= 1.0;
            for (int n : cfg.n) {
                const RealizationResult r = realization(fg, 1.0 / n, b, p);
                rows.push_back({static_cast<double>(n), r.value, r.approx_term, r.smooth_term});
                ok = ok && std::isfinite(r.value) && r.value >= 0.0;
                winners.push_back({{"beta", b},
                                   {"p", std::isinf(pv) ? json("inf") : json(pv)},
                                   {"n", n},
                                   {"candidate", r.candidate_id}});
                if (has_k) {
                    const double kv = k_functional_upper(fg, 1.0 / n, b, p);
                    upper.emplace_back(static_cast<double>(n), kv);
                    ok = ok && kv <= r.value + 1e-12;
                }
            }
            io::write_table_csv(target(cfg, man, "realization" + suffix + ".csv"), cols, rows, st);
            if (has_k)
                io::write_pairs_csv(target(cfg, man, "kfun_upper" + suffix + ".csv"), "n", "value",
                                    upper, st);
            man.add_check("kfun-consistent" + suffix, ok,
                          has_k ? "realization finite, K-upper below it"
                                : "realization finite (K-functional skipped for p < 1)");
        }
    }
    io::write_text(target(cfg, man, "realization_winners.json"), winners.dump(2) + "\n");
}

void cmd_modulus(const Config& cfg, Manifest& man) {
    const io::FileStamp st = stamp_of(cfg, man);
    const SpectralPolynomial f = build_function(cfg);
    const double tail_tol = tol_or(cfg, "tail_tol", 1e-8);
    for (double b : cfg.beta) {
        for (double pv : cfg.p) {
            const Exponent p = exponent_of(pv);
            const double fb = lp_norm(f, p);
            const ModulusSpec spec = ModulusSpec::resolve(b, cfg.d, std::max(fb, 1e-12), tail_tol);
            const std::vector<std::string> cols{"n", "value", "error_bar"};
            std::vector<std::vector<double>> rows;
            double worst_bar = 0.0;
            for (int n : cfg.n) {
                const ModulusResult m = special_modulus(f, 1.0 / n, spec, p);
                rows.push_back({static_cast<double>(n), m.value, m.error_bar});
                worst_bar = std::max(worst_bar, m.error_bar);
            }
            const std::string suffix = "_b" + num_tag(b) + "_p" + num_tag(pv);
            io::write_table_csv(target(cfg, man, "modulus" + suffix + ".csv"), cols, rows, st);
            const double bar_cap = 100.0 * tail_tol * std::max(1.0, fb);
            man.add_check("modulus-error-bar" + suffix, worst_bar <= bar_cap,
                          "max error bar " + io::format_number(worst_bar) + " vs cap " +
                              io::format_number(bar_cap));
        }
    }
}

void cmd_equivalence(const Config& cfg, Manifest& man) {
    const io::FileStamp st = stamp_of(cfg, man);
    const SpectralPolynomial f = build_function(cfg);
    const double bracket_max = tol_or(cfg, "bracket_max", 400.0);
    json summary = json::array();
    for (double b : cfg.beta) {
        for (double dl : cfg.delta) {
            for (double pv : cfg.p) {
                const Exponent p = exponent_of(pv);
                const EquivalenceReport rep = equivalence_report(
                    f, b, dl, p, cfg.n, cfg.override_region, tol_or(cfg, "tail_tol", 1e-8));
                const std::string suffix =
                    "_b" + num_tag(b) + "_dl" + num_tag(dl) + "_p" + num_tag(pv);
                io::write_equivalence_csv(target(cfg, man, "equivalence" + suffix + ".csv"), rep,
                                          st);
                json rec;
                rec["beta"] = b;
                rec["delta"] = dl;
                rec["p"] = std::isinf(pv) ? json("inf") : json(pv);
                rec["c_upper"] = rep.c_upper;
                rec["c_lower"] = rep.c_lower;
                rec["drift_flags"] = rep.drift_flags;
                summary.push_back(rec);

                if (!cfg.override_region) {
                    man.add_check("equivalence-no-drift" + suffix, rep.drift_flags.empty(),
                                  std::to_string(rep.drift_flags.size()) + " drifting ratio pairs");
                    const double width = rep.c_upper * rep.c_lower;
                    man.add_check("equivalence-bracket" + suffix, width <= bracket_max,
                                  "two-sided bracket width " + io::format_number(width));
                }
            }
        }
    }
    io::write_text(target(cfg, man, "equivalence_summary.json"), summary.dump(2) + "\n");
}

void cmd_regions(const Config& cfg, Manifest& man) {
    const io::FileStamp st = stamp_of(cfg, man);
    if (cfg.raster_steps < 2) throw bad_config("raster_steps must be at least 2");
    std::vector<io::RegionRasterRow> rows;
    for (int i = 0; i < cfg.raster_steps; ++i) {
        for (int jj = 0; jj < cfg.raster_steps; ++jj) {
            const double ip = cfg.inv_p_max * i / (cfg.raster_steps - 1);
            const double dl = cfg.delta_max * jj / (cfg.raster_steps - 1);
            rows.push_back({ip, dl, to_string(classify(RegionPoint(ip, dl, cfg.d)))});
        }
    }
    io::write_region_raster_csv(
        target(cfg, man, "regions_raster_d" + std::to_string(cfg.d) + ".csv"), rows, st);
    man.add_check("raster-complete",
                  rows.size() == static_cast<std::size_t>(cfg.raster_steps) * cfg.raster_steps,
                  std::to_string(rows.size()) + " lattice points labeled");

    json verdicts = json::array();
    for (double pv : cfg.p) {
        for (double dl : cfg.delta) {
            for (double b : cfg.beta) {
                const Exponent p = exponent_of(pv);
                const Verdict v = verdict(RegionPoint(p.inv(), dl, cfg.d), b, p);
                verdicts.push_back({{"p", std::isinf(pv) ? json("inf") : json(pv)},
                                    {"delta", dl},
                                    {"beta", b},
                                    {"region", to_string(v.region)},
                                    {"means", to_string(v.means_converge)},
                                    {"family", to_string(v.family_converge)}});
            }
        }
    }
    io::write_text(target(cfg, man, "region_verdicts.json"), verdicts.dump(2) + "\n");
}

void cmd_ft(const Config& cfg, Manifest& man) {
    const io::FileStamp st = stamp_of(cfg, man);
    if (!(cfg.y_lo > 0.0) || !(cfg.y_hi > cfg.y_lo))
        throw bad_config("transform sweep wants 0 < y_lo < y_hi");
    if (cfg.y_points < 8) throw bad_config("transform sweep wants at least 8 points");

    std::vector<double> ys(static_cast<std::size_t>(cfg.y_points));
    const double ratio = std::log(cfg.y_hi / cfg.y_lo);
    for (int i = 0; i < cfg.y_points; ++i)
        ys[static_cast<std::size_t>(i)] =
            cfg.y_lo * std::exp(ratio * i / (cfg.y_points - 1));

    const double oracle_tol = tol_or(cfg, "ball_oracle", 1e-6);
    const double window = tol_or(cfg, "exponent_window", 0.3);
    json fits = json::array();

    for (double dl : cfg.delta) {
        // ball profile (1 - |x|^2)_+^delta against its closed form
        RadialProfile prof = RadialProfile::from_function(
            cfg.d, 1.0, [dl](double r) { return std::pow(std::max(0.0, 1.0 - r * r), dl); });
        std::vector<double> num(ys.size());
        kern::parallel_for(ys.size(), [&](std::size_t i) {
            num[i] = radial_transform(prof, ys[i], Convention::two_pi);
        });
        std::vector<std::pair<double, double>> sweep, oracle;
        double worst = 0.0;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const double want = ball_transform_closed_form(dl, cfg.d, ys[i]);
            const double env = ball_oscillation_envelope(dl, cfg.d, ys[i]);
            sweep.emplace_back(ys[i], num[i]);
            oracle.emplace_back(ys[i], want);
            worst = std::max(worst, std::abs(num[i] - want) / env);
        }
        const std::string dtag = "_dl" + num_tag(dl) + "_d" + std::to_string(cfg.d);
        io::write_pairs_csv(target(cfg, man, "ft_ball" + dtag + ".csv"), "y", "value", sweep, st);
        io::write_pairs_csv(target(cfg, man, "ft_ball_oracle" + dtag + ".csv"), "y", "value",
                            oracle, st);
        man.add_check("ball-oracle" + dtag, worst <= oracle_tol,
                      "max envelope-relative gap " + io::format_number(worst));

        // annulus profile: envelope and boundary-residual exponents. The fit
        // wants y >= 2 and enough octaves past the smooth-part crossover,
        // which moves out with delta, so its range extends past the sweep's.
        const double ann_lo = std::max(2.0, cfg.y_lo);
        const double ann_hi =
            std::max(cfg.y_hi, 512.0 * std::pow(4.0, std::max(0.0, dl - 1.0)));
        const AnnulusReport ann = annulus_transform_check(dl, cfg.d, ann_lo, ann_hi);
        const double env_want = -0.5 * (cfg.d + 1) - dl;
        const double res_cap = -0.5 * (cfg.d + 3) - dl + window;
        fits.push_back({{"kind", "annulus"},
                        {"delta", dl},
                        {"d", cfg.d},
                        {"envelope_exponent", ann.envelope.exponent},
                        {"envelope_residual", ann.envelope.residual},
                        {"residual_exponent", ann.residual.exponent},
                        {"leading_amplitude", ann.leading_amplitude}});
        man.add_check("annulus-envelope" + dtag,
                      std::abs(ann.envelope.exponent - env_want) <= window,
                      "exponent " + io::format_number(ann.envelope.exponent) + " vs " +
                          io::format_number(env_want));
        man.add_check("annulus-residual" + dtag, ann.residual.exponent <= res_cap,
                      "exponent " + io::format_number(ann.residual.exponent) + " vs cap " +
                          io::format_number(res_cap));
    }

    for (double b : cfg.beta) {
        for (double dl : cfg.delta) {
            for (double pv : cfg.p) {
                const Exponent p = exponent_of(pv);
                const TailReport tail = symbol_transform_tail(RieszSymbol(b, dl), cfg.d, p);
                const bool even_beta =
                    b == std::nearbyint(b) && std::fmod(std::nearbyint(b), 2.0) == 0.0;
                const double boundary = -0.5 * (cfg.d + 1) - dl;
                const double origin = -(cfg.d + b);
                const double want = even_beta ? boundary : std::max(boundary, origin);
                const std::string suffix =
                    "_b" + num_tag(b) + "_dl" + num_tag(dl) + "_p" + num_tag(pv);
                fits.push_back({{"kind", "symbol-tail"},
                                {"beta", b},
                                {"delta", dl},
                                {"p", std::isinf(pv) ? json("inf") : json(pv)},
                                {"exponent", tail.fit.exponent},
                                {"residual", tail.fit.residual},
                                {"blocks", tail.fit.blocks},
                                {"verdict_applicable", tail.verdict_applicable},
                                {"predicted_integrable", tail.predicted_integrable},
                                {"numeric_integrable", tail.numeric_integrable}});
                man.add_check("tail-exponent" + suffix,
                              std::abs(tail.fit.exponent - want) <= window,
                              "exponent " + io::format_number(tail.fit.exponent) + " vs " +
                                  io::format_number(want));
            }
        }
    }
    io::write_text(target(cfg, man, "ft_fits.json"), fits.dump(2) + "\n");
}

// ------------------------------------------------------------------- run ---

int run(Config& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Manifest man;
    man.config = config_to_json(cfg);
    // The hash identifies the experiment, not its disk location: the same
    // config rerun into another directory must produce identical bytes.
    json hashed = man.config;
    hashed.erase("out");
    man.hash = io::fnv1a_hex(hashed.dump());

    using Body = void (*)(const Config&, Manifest&);
    static const std::map<std::string, Body> table{
        {"kernel", cmd_kernel},     {"means", cmd_means},
        {"family", cmd_family},     {"norms", cmd_norms},
        {"kfun", cmd_kfun},         {"modulus", cmd_modulus},
        {"equivalence", cmd_equivalence}, {"regions", cmd_regions},
        {"ft", cmd_ft}};
    table.at(cfg.experiment)(cfg, man);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json out;
    out["experiment"] = cfg.experiment;
    out["config"] = man.config;
    out["config_hash"] = man.hash;
    out["seed"] = cfg.seed;
    out["code_version"] = BR_CODE_VERSION;
    out["wall_time_seconds"] = wall;
    out["outputs"] = man.outputs;
    out["checks"] = man.checks;
    io::write_text(std::filesystem::path(cfg.out) / "manifest.json", out.dump(2) + "\n");

    for (const json& c : man.checks)
        std::printf("check %-40s %s  (%s)\n", c["name"].get<std::string>().c_str(),
                    c["pass"].get<bool>() ? "pass" : "FAIL",
                    c["detail"].get<std::string>().c_str());
    const bool pass = man.all_pass();
    std::printf("%s: %s  [%zu files, hash %s, %.2fs]\n", cfg.experiment.c_str(),
                pass ? "PASS" : "FAIL", man.outputs.size(), man.hash.c_str(), wall);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Riesz summability experiments: sweeps, tables, manifests"};
    app.fallthrough();
    std::string config_path, out_path;
    long long seed = -1;
    int jobs = 0;
    std::vector<std::string> tol_kv;
    app.add_option("--config", config_path, "JSON config: a file path, or the document inline");
    app.add_option("--out", out_path, "output directory (overrides the config)");
    app.add_option("--seed", seed, "RNG seed (overrides the config)");
    app.add_option("--jobs", jobs, "worker cap for parallel loops, 0 = hardware default");
    app.add_option("--tol", tol_kv, "tolerance override name=value (repeatable)");

    app.add_subcommand("kernel", "kernel coefficient tables, grid evaluations, expansions");
    app.add_subcommand("means", "approximation error of the means on a chosen input");
    app.add_subcommand("family", "shifted sampling sums against the means");
    app.add_subcommand("norms", "operator norm sweeps with convergence verdicts");
    app.add_subcommand("kfun", "realization and K-functional sweeps");
    app.add_subcommand("modulus", "integral smoothness gauge sweeps");
    app.add_subcommand("equivalence", "all four error gauges side by side");
    app.add_subcommand("regions", "parameter-plane raster and verdicts");
    app.add_subcommand("ft", "radial transform sweeps, oracles, and tail fits");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        json doc = json::object();
        if (!config_path.empty()) {
            try {
                doc = json::parse(io::read_text(config_path));
            } catch (const json::exception& e) {
                throw bad_config(std::string("config is not valid JSON: ") + e.what());
            }
        }
        Config cfg = config_from_json(doc);
        cfg.experiment = app.get_subcommands().front()->get_name();
        if (!out_path.empty()) cfg.out = out_path;
        if (cfg.out.empty()) cfg.out = "runs/" + cfg.experiment;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        for (const std::string& kv : tol_kv) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw bad_config("tolerance override wants name=value, got '" + kv + "'");
            try {
                cfg.tol[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            } catch (const std::exception&) {
                throw bad_config("malformed tolerance value in '" + kv + "'");
            }
        }
        if (jobs > 0) set_worker_count(jobs);
        return run(cfg);
    } catch (const error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
