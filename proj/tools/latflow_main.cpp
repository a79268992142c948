// Batch experiment driver. Every command reads an explicit configuration
// (flags, optionally overridden by a config file), runs one experiment, and
// writes a deterministic report: same config and seed give byte-identical
// output apart from the "# generated:" line.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric or size guard
// tripped, 4 experiment falsified its own preconditions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latflow/exponents.hpp"
#include "latflow/flow.hpp"
#include "latflow/goodness.hpp"
#include "latflow/lattice.hpp"
#include "latflow/maps.hpp"
#include "latflow/nondivergence.hpp"
#include "latflow/report.hpp"

namespace lf = latflow;

namespace {

struct FalsifiedPrecondition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Opts {
    std::string map = "mahler2";
    double x = 0.3, y = 0.4;           // parameter point
    double cx = 0, cy = 0, r = 1;      // sampling ball
    bool square = false;               // sup-metric ball
    long long hmax = 200;
    int tmax = 6;
    double gamma = 0.2;
    double c = 1.0;
    std::size_t samples = 20000;
    long long seed = -1;               // mandatory (>= 0) for sampled runs
    unsigned workers = 1;
    std::string norm = "sup";
    std::string eps;                   // comma list, absolute values
    long height = 1;                   // subgroup family truncation
    std::string t;                     // comma list of flow components
    std::size_t pair_angles = 32;
    std::string fn = "x";
    std::size_t component = 0;
    std::string out;
    std::string config;
    bool no_timestamp = false;
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

// "key = value" per line, '#' comments; keys match the long flag names
void apply_config_file(const std::string& path, Opts& o) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    while (std::getline(f, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key == "map") o.map = val;
        else if (key == "x") o.x = std::stod(val);
        else if (key == "y") o.y = std::stod(val);
        else if (key == "cx") o.cx = std::stod(val);
        else if (key == "cy") o.cy = std::stod(val);
        else if (key == "radius") o.r = std::stod(val);
        else if (key == "square") o.square = val == "1" || val == "true";
        else if (key == "hmax") o.hmax = std::stoll(val);
        else if (key == "tmax") o.tmax = std::stoi(val);
        else if (key == "gamma") o.gamma = std::stod(val);
        else if (key == "c") o.c = std::stod(val);
        else if (key == "samples") o.samples = std::stoull(val);
        else if (key == "seed") o.seed = std::stoll(val);
        else if (key == "workers") o.workers = unsigned(std::stoul(val));
        else if (key == "norm") o.norm = val;
        else if (key == "eps_grid") o.eps = val;
        else if (key == "height") o.height = std::stol(val);
        else if (key == "t") o.t = val;
        else if (key == "pair_angles") o.pair_angles = std::stoull(val);
        else if (key == "fn") o.fn = val;
        else if (key == "component") o.component = std::stoull(val);
        else if (key == "out") o.out = val;
        else if (key == "no_timestamp") o.no_timestamp = val == "1" || val == "true";
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

lf::AnalyticMap resolve_map(const std::string& name) {
    for (const auto& b : lf::builtin_map_names())
        if (b == name) return lf::builtin_map(name);
    return lf::load_map_file(name);
}

lf::Norm parse_norm(const std::string& s) {
    if (s == "sup") return lf::Norm::sup;
    if (s == "euclidean") return lf::Norm::euclidean;
    throw std::invalid_argument("norm must be sup or euclidean");
}

void require_seed(const Opts& o) {
    if (o.seed < 0)
        throw std::invalid_argument("sampled experiments need an explicit --seed >= 0");
}

void emit(const lf::Report& rep, const lf::Csv* csv, const Opts& o) {
    bool ts = !o.no_timestamp;
    if (o.out.empty()) {
        std::cout << rep.str(ts);
        return;
    }
    rep.write(o.out, ts);
    if (csv) csv->write(o.out + ".csv");
    std::cout << "wrote " << o.out << "\n";
}

std::string join_ll(const std::vector<long long>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
    }
    return s;
}

std::string join_d(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += lf::fmt_double(v[i]);
    }
    return s;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int run_exponent(const Opts& o) {
    auto f = resolve_map(o.map);
    lf::Report rep("exponent");
    rep.kv("map", o.map);
    rep.kv("n", f.n);
    rep.kv("hmax", static_cast<long long>(o.hmax));

    if (o.seed < 0) {
        // single-point mode at (--x, --y): no sampling, hence no seed; pass
        // --seed to sample points from the ball instead
        rep.kv("x", o.x);
        rep.kv("y", o.y);
        auto z = f.eval(o.x, o.y);
        auto records = lf::best_approximations(z, o.hmax, o.workers);
        auto om = lf::diophantine_exponent_fit(records);
        auto omx = lf::multiplicative_exponent_fit(records, f.n);
        auto dir = lf::dirichlet_bound_fit(records, f.n);
        rep.blank();
        rep.kv("records", records.size());
        rep.kv("omega", om.value);
        rep.kv("omega_tail", om.tail_count);
        rep.kv("omega_mult", omx.value);
        rep.kv("omega_mult_tail", omx.tail_count);
        rep.kv("exact_hit", std::string(om.exact_hit ? "true" : "false"));
        rep.kv("dirichlet_c", dir.c_estimate);
        lf::Csv csv({"height", "p", "q", "error", "pi_plus"});
        for (const auto& r : records)
            csv.row({std::to_string(r.height), std::to_string(r.p), join_ll(r.q),
                     lf::fmt_double(r.error), r.pi_plus.str()});
        emit(rep, &csv, o);
        return 0;
    }

    require_seed(o);
    rep.kv("samples", o.samples);
    rep.kv("seed", static_cast<long long>(o.seed));
    rep.kv("ball", lf::fmt_short(o.cx) + " " + lf::fmt_short(o.cy) + " " + lf::fmt_short(o.r));
    auto pts = lf::ball_samples({o.cx, o.cy, o.r, o.square}, o.samples,
                                static_cast<std::uint64_t>(o.seed));
    lf::Csv csv({"x", "y", "records", "omega", "omega_mult"});
    std::vector<double> omegas, omegas_mult;
    std::size_t skipped = 0;
    for (const auto& p : pts) {
        auto records = lf::best_approximations(f.eval(p[0], p[1]), o.hmax, o.workers);
        if (records.size() < 3) {
            // not enough records to fit a slope; raise --hmax to avoid these
            ++skipped;
            csv.row({lf::fmt_double(p[0]), lf::fmt_double(p[1]),
                     std::to_string(records.size()), "", ""});
            continue;
        }
        auto om = lf::diophantine_exponent_fit(records);
        auto omx = lf::multiplicative_exponent_fit(records, f.n);
        omegas.push_back(om.value);
        omegas_mult.push_back(omx.value);
        csv.row({lf::fmt_double(p[0]), lf::fmt_double(p[1]), std::to_string(records.size()),
                 lf::fmt_double(om.value), lf::fmt_double(omx.value)});
    }
    rep.blank();
    rep.kv("points", pts.size());
    rep.kv("skipped", skipped);
    rep.kv("omega_median", median(omegas));
    rep.kv("omega_mult_median", median(omegas_mult));
    emit(rep, &csv, o);
    return 0;
}

void compositions_upto(std::size_t n, int total_max,
                       const std::function<void(const std::vector<double>&)>& emit_t) {
    std::vector<double> cur(n, 0.0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int budget) {
        if (idx + 1 == n) {
            for (int v = 0; v <= budget; ++v) {
                cur[idx] = v;
                emit_t(cur);
            }
            return;
        }
        for (int v = 0; v <= budget; ++v) {
            cur[idx] = v;
            rec(idx + 1, budget - v);
        }
    };
    if (n) rec(0, total_max);
}

int run_orbit(const Opts& o) {
    auto f = resolve_map(o.map);
    auto norm = parse_norm(o.norm);
    auto z = lf::ComplexPoint::from_complex(f.eval(o.x, o.y));

    lf::Report rep("orbit");
    rep.kv("map", o.map);
    rep.kv("x", o.x);
    rep.kv("y", o.y);
    rep.kv("gamma", o.gamma);
    rep.kv("tmax", static_cast<long long>(o.tmax));
    rep.kv("norm", o.norm);

    lf::Csv csv({"t", "total", "delta", "threshold", "qualifies"});
    std::size_t rows = 0, qualifying = 0;
    std::string first_q;
    compositions_upto(f.n, o.tmax, [&](const std::vector<double>& tvec) {
        lf::FlowTime t(tvec);
        double total = t.total();
        double d = lf::orbit_shortest(z, t, norm);
        double threshold = std::exp(-o.gamma * total);
        bool q = d <= threshold;
        csv.row({join_d(tvec), lf::fmt_short(total), lf::fmt_double(d),
                 lf::fmt_double(threshold), q ? "1" : "0"});
        ++rows;
        if (q) {
            ++qualifying;
            if (first_q.empty()) first_q = join_d(tvec);
        }
    });
    rep.blank();
    rep.kv("rows", rows);
    rep.kv("qualifying", qualifying);
    if (!first_q.empty()) rep.kv("first_qualifying_t", first_q);
    emit(rep, &csv, o);
    return 0;
}

int run_nondiv(const Opts& o) {
    require_seed(o);
    auto f = resolve_map(o.map);
    std::size_t n = f.n;
    auto seed = static_cast<std::uint64_t>(o.seed);
    lf::Ball ball{o.cx, o.cy, o.r, o.square};

    std::vector<double> tvec = parse_list(o.t);
    if (tvec.empty()) tvec.assign(n, double(o.tmax) / double(n));
    if (tvec.size() != n) throw std::invalid_argument("t list length does not match map dimension");
    lf::FlowTime t(tvec);

    auto lambda = lf::approximant_lattice(n);
    auto family = lf::enumerate_subgroups(lambda, n + 1, o.height);

    auto fit = lf::family_goodness_fit(f, ball, family, {t}, o.samples, lf::default_eps_grid(),
                                       seed, o.workers);
    auto floor = lf::family_sup_floor(f, ball, family, {t}, o.samples, seed, o.pair_angles);

    std::vector<double> grid = parse_list(o.eps);
    if (grid.empty())
        for (double e : lf::default_eps_grid()) grid.push_back(e * floor.rho);

    auto exp_rep = lf::sublevel_bound_experiment(f, ball, t, fit.C_worst, fit.alpha_worst,
                                                 floor.rho, o.c, grid, o.samples, seed,
                                                 o.workers);
    exp_rep.family_size = family.size();
    exp_rep.truncation_height = o.height;

    lf::Report rep("nondiv");
    rep.kv("map", o.map);
    rep.kv("ball", lf::fmt_short(o.cx) + " " + lf::fmt_short(o.cy) + " " + lf::fmt_short(o.r));
    rep.kv("t", join_d(tvec));
    rep.kv("samples", o.samples);
    rep.kv("seed", static_cast<long long>(o.seed));
    rep.kv("c", o.c);
    rep.blank();
    rep.kv("family_size", family.size());
    rep.kv("truncation_height", static_cast<long long>(o.height));
    rep.kv("span_failures", fit.span_failures);
    rep.kv("degenerate_fits", fit.degenerate_count);
    rep.kv("C", fit.C_worst);
    rep.kv("alpha", fit.alpha_worst);
    rep.kv("rho", floor.rho);
    rep.kv("rho1", floor.rho1);
    rep.kv("rho2", floor.rho2);
    rep.kv("argmin_member", floor.argmin_member);
    rep.blank();
    rep.kv("slope_fit", exp_rep.slope_fit);
    rep.kv("violations", static_cast<long long>(exp_rep.violations));
    lf::Csv csv({"eps", "measured", "bound"});
    for (std::size_t g = 0; g < exp_rep.eps_grid.size(); ++g)
        csv.row({lf::fmt_double(exp_rep.eps_grid[g]), lf::fmt_double(exp_rep.measured[g]),
                 lf::fmt_double(exp_rep.bound[g])});
    emit(rep, &csv, o);

    if (fit.span_failures > 0)
        throw FalsifiedPrecondition("covolume coordinates left the expected span");
    if (exp_rep.violations > 0)
        throw FalsifiedPrecondition("sublevel measure exceeded the fitted bound");
    return 0;
}

int run_goodfit(const Opts& o) {
    require_seed(o);
    auto seed = static_cast<std::uint64_t>(o.seed);
    lf::Ball ball{o.cx, o.cy, o.r, o.square};
    auto grid = lf::default_eps_grid();

    lf::Report rep("goodfit");
    rep.kv("fn", o.fn);
    rep.kv("ball", lf::fmt_short(o.cx) + " " + lf::fmt_short(o.cy) + " " + lf::fmt_short(o.r) +
                       (o.square ? " square" : " disc"));
    rep.kv("samples", o.samples);
    rep.kv("seed", static_cast<long long>(o.seed));

    if (o.fn == "combine-xy") {
        // fit x alone, then check the root-sum-of-squares combination of
        // {x, y} against the scaled constants
        auto base = lf::good_fit([](double x, double) { return x; }, ball, o.samples, grid,
                                 seed, o.workers);
        auto comb = lf::combine_good({[](double x, double) { return x; },
                                      [](double, double y) { return y; }},
                                     base.C, base.alpha, ball, o.samples, grid, seed);
        rep.blank();
        rep.kv("C", base.C);
        rep.kv("alpha", base.alpha);
        rep.kv("members_ok", std::string(comb.members_ok ? "true" : "false"));
        rep.kv("combined_ok", std::string(comb.combined_ok ? "true" : "false"));
        rep.kv("C_combined", comb.C_combined);
        emit(rep, nullptr, o);
        return 0;
    }

    lf::RealFn fn;
    if (o.fn == "x") fn = [](double x, double) { return x; };
    else if (o.fn == "y") fn = [](double, double y) { return y; };
    else if (o.fn == "x2") fn = [](double x, double) { return x * x; };
    else if (o.fn == "r2") fn = [](double x, double y) { return x * x + y * y; };
    else if (o.fn == "one") fn = [](double, double) { return 1.0; };
    else if (o.fn == "map-component") {
        auto f = resolve_map(o.map);
        if (o.component >= f.n) throw std::invalid_argument("component index out of range");
        auto comp = f.components[o.component];
        fn = [comp](double x, double y) { return comp.eval(x, y).real(); };
        rep.kv("map", o.map);
        rep.kv("component", o.component);
    } else {
        throw std::invalid_argument("unknown fn: " + o.fn);
    }

    auto fit = lf::good_fit(fn, ball, o.samples, grid, seed, o.workers);
    rep.blank();
    rep.kv("C", fit.C);
    rep.kv("alpha", fit.alpha);
    rep.kv("sup", fit.sup_estimate);
    rep.kv("points", fit.sample_count);
    rep.kv("violations", static_cast<long long>(fit.violation_count));
    rep.kv("degenerate", std::string(fit.degenerate ? "true" : "false"));
    lf::Csv csv({"eps", "ratio", "bound"});
    for (std::size_t g = 0; g < grid.size(); ++g)
        csv.row({lf::fmt_double(grid[g]), lf::fmt_double(fit.ratios[g]),
                 lf::fmt_double(fit.C * std::pow(grid[g], fit.alpha))});
    emit(rep, &csv, o);
    return 0;
}

int run_maps_list(const Opts& o) {
    lf::Report rep("maps-list");
    for (const auto& name : lf::builtin_map_names()) {
        auto f = lf::builtin_map(name);
        std::string flags;
        flags += f.analytic() ? "analytic" : "non-analytic";
        flags += lf::independent_over_reals(f) ? ", independent/R" : ", dependent/R";
        flags += lf::independent_over_complexes(f) ? ", independent/C" : ", dependent/C";
        rep.kv(name, "n=" + std::to_string(f.n) + " (" + flags + ")");
    }
    emit(rep, nullptr, o);
    return 0;
}

void add_common(CLI::App* cmd, Opts& o) {
    cmd->add_option("--map", o.map, "builtin map name or map file path");
    cmd->add_option("--x", o.x, "parameter point, real part");
    cmd->add_option("--y", o.y, "parameter point, imaginary part");
    cmd->add_option("--cx", o.cx, "sampling ball center x");
    cmd->add_option("--cy", o.cy, "sampling ball center y");
    cmd->add_option("--radius", o.r, "sampling ball radius");
    cmd->add_flag("--square", o.square, "sup-metric ball");
    cmd->add_option("--hmax", o.hmax, "denominator height cap");
    cmd->add_option("--tmax", o.tmax, "flow time total cap");
    cmd->add_option("--gamma", o.gamma, "contraction rate");
    cmd->add_option("--c", o.c, "bound constant");
    cmd->add_option("--samples", o.samples, "sample count");
    cmd->add_option("--seed", o.seed, "RNG seed, required for sampled runs");
    cmd->add_option("--workers", o.workers, "worker thread count");
    cmd->add_option("--norm", o.norm, "sup or euclidean");
    cmd->add_option("--eps-grid", o.eps, "comma-separated epsilon grid");
    cmd->add_option("--height", o.height, "subgroup family truncation height");
    cmd->add_option("--t", o.t, "comma-separated flow time components");
    cmd->add_option("--pair-angles", o.pair_angles, "angle grid size for the pair family");
    cmd->add_option("--fn", o.fn, "goodfit function name");
    cmd->add_option("--component", o.component, "map component index");
    cmd->add_option("--out", o.out, "output path (text report; .csv appended for tables)");
    cmd->add_option("--config", o.config, "config file overriding flags");
    cmd->add_flag("--no-timestamp", o.no_timestamp, "omit the generated-at line");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice-flow experiments"};
    app.require_subcommand(1);
    Opts o;
    auto* c_exp = app.add_subcommand("exponent", "best-approximation exponent estimates");
    auto* c_orb = app.add_subcommand("orbit", "shortest-vector trace along a flow orbit");
    auto* c_non = app.add_subcommand("nondiv", "sublevel-measure bound experiment");
    auto* c_goo = app.add_subcommand("goodfit", "(C, alpha) sublevel fitting");
    auto* c_map = app.add_subcommand("maps-list", "list builtin maps");
    for (auto* cmd : {c_exp, c_orb, c_non, c_goo, c_map}) add_common(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!o.config.empty()) apply_config_file(o.config, o);
        if (c_exp->parsed()) return run_exponent(o);
        if (c_orb->parsed()) return run_orbit(o);
        if (c_non->parsed()) return run_nondiv(o);
        if (c_goo->parsed()) return run_goodfit(o);
        if (c_map->parsed()) return run_maps_list(o);
        return 2;
    } catch (const lf::NumericGuard& e) {
        std::cerr << "numeric guard: " << e.what() << "\n";
        return 3;
    } catch (const lf::SizeGuardExceeded& e) {
        std::cerr << "size guard: " << e.what() << "\n";
        return 3;
    } catch (const FalsifiedPrecondition& e) {
        std::cerr << "precondition falsified: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
