// ekwave: solitary-wave analysis and periodic-domain evolution for the
// Euler-Korteweg system.
//
// Subcommands
//   analyze  moment of instability m(c), m'(c), m''(c) + stability verdicts
//   profile  reconstruct a solitary-wave profile to CSV
//   evolve   spectral RK4 evolution of a (perturbed) wave, orbital-distance log
//   models   list built-in model families
//
// Exit codes: 0 ok; 1 hard error; 2 no solitary wave (or degenerate) at a
// requested speed; 3 evolution run aborted; 64 configuration/parse error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "ekwave/errors.hpp"
#include "ekwave/evolution.hpp"
#include "ekwave/io.hpp"
#include "ekwave/model.hpp"
#include "ekwave/moment.hpp"
#include "ekwave/profile.hpp"

namespace {

using namespace ekwave;

model load_model(const std::string& spec) {
    if (spec.find(':') != std::string::npos || spec == "bona-sachs" ||
        spec == "gross-pitaevskii")
        return model::from_selector(spec);
    return model::from_file(spec);
}

std::optional<wave_direction> parse_direction(const std::string& s) {
    if (s.empty()) return {};
    if (s == "elevation") return wave_direction::elevation;
    if (s == "depression") return wave_direction::depression;
    throw config_error("direction must be 'elevation' or 'depression'");
}

std::vector<double> expand_range(const std::string& range) {
    const auto c1 = range.find(':');
    const auto c2 = range.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw config_error("--c-range expects lo:hi:count, got '" + range + "'");
    double lo, hi;
    long count;
    try {
        std::size_t used = 0;
        lo = std::stod(range.substr(0, c1), &used);
        hi = std::stod(range.substr(c1 + 1, c2 - c1 - 1), &used);
        count = std::stol(range.substr(c2 + 1), &used);
    } catch (const std::exception&) {
        throw config_error("--c-range expects lo:hi:count, got '" + range + "'");
    }
    if (count < 1) throw config_error("--c-range: count must be >= 1");
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) {
        out.push_back(lo);
    } else {
        for (long i = 0; i < count; ++i)
            out.push_back(lo + (hi - lo) * double(i) / double(count - 1));
    }
    return out;
}

std::filesystem::path prepare_out_dir(const std::string& out) {
    std::filesystem::path dir(out.empty() ? "." : out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw config_error("cannot create output directory '" + out + "': " + ec.message());
    return dir;
}

// ------------------------------------------------------------
// analyze
// ------------------------------------------------------------

struct analyze_opts {
    std::string model_spec;
    double v_star = 0.0, u_star = 0.0;
    std::vector<double> speeds;
    std::string c_range;
    std::string direction;
    std::string out = ".";
    double tol_quad = 1e-10, tol_root = 1e-12;
};

int run_analyze(const analyze_opts& o) {
    const model m = load_model(o.model_spec);
    std::vector<double> speeds = o.speeds;
    if (!o.c_range.empty()) {
        const auto r = expand_range(o.c_range);
        speeds.insert(speeds.end(), r.begin(), r.end());
    }
    if (speeds.empty())
        throw config_error("analyze: no speeds requested (use --c and/or --c-range)");

    const moment_tolerances tol{o.tol_quad, o.tol_root};
    const auto rows =
        moment_curve(m, o.v_star, o.u_star, speeds, parse_direction(o.direction), tol);

    const auto dir = prepare_out_dir(o.out);
    io::write_moment_curve_csv((dir / "moment_curve.csv").string(), rows);

    nlohmann::ordered_json j;
    j["model"] = io::model_to_json(m);
    j["v_star"] = o.v_star;
    j["u_star"] = o.u_star;
    j["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) j["reports"].push_back(io::report_to_json(r));
    io::write_json((dir / "report.json").string(), j);

    bool any_failed = false;
    for (const auto& r : rows) {
        if (r.status == analysis_status::ok) {
            std::cout << "c=" << io::fmt(r.c) << ": m=" << io::fmt(r.m)
                      << " m'=" << io::fmt(r.m_prime) << " m''=" << io::fmt(r.m_second)
                      << " verdict=" << to_string(*r.verdict) << "\n";
        } else {
            any_failed = true;
            std::cout << "c=" << io::fmt(r.c) << ": " << to_string(r.status) << " ("
                      << r.status_detail << ")\n";
        }
    }
    std::cout << "wrote " << (dir / "moment_curve.csv").string() << " and "
              << (dir / "report.json").string() << "\n";
    return any_failed ? 2 : 0;
}

// ------------------------------------------------------------
// profile
// ------------------------------------------------------------

struct profile_opts {
    std::string model_spec;
    double v_star = 0.0, u_star = 0.0, c = 0.0;
    int points = 2001;
    double xi_max = 0.0;
    std::string direction;
    std::string out = ".";
    double tol_root = 1e-12;
};

int run_profile(const profile_opts& o) {
    const model m = load_model(o.model_spec);
    profile_options popts;
    popts.n_points = o.points;
    popts.xi_max = o.xi_max;
    popts.direction = parse_direction(o.direction);
    popts.root_rel_tol = o.tol_root;

    const profile p = reconstruct_profile(m, wave_parameters{o.v_star, o.u_star, o.c}, popts);

    const auto dir = prepare_out_dir(o.out);
    io::write_profile_csv((dir / "profile.csv").string(), p);

    std::cout << "v_m = " << io::fmt(p.v_m) << "\n"
              << "direction = "
              << (p.direction == wave_direction::elevation ? "elevation" : "depression")
              << "\n"
              << "decay_rate = " << io::fmt(p.decay_rate) << "\n"
              << "first_integral_residual = " << io::fmt(p.first_integral_residual) << "\n"
              << "wrote " << (dir / "profile.csv").string() << "\n";
    return 0;
}

// ------------------------------------------------------------
// evolve
// ------------------------------------------------------------

struct evolve_opts {
    std::string model_spec;
    double v_star = 0.0, u_star = 0.0, c = 0.0;
    double L = 40.0;
    int n = 1024;
    double T = 20.0;
    double dt = 0.0;
    double dt_safety = 0.5;
    double delta = 0.0;
    double center = 0.0;
    double width = 0.0;
    int sample_stride = 0;
    double growth_factor = 10.0;
    bool no_stop_on_growth = false;
    std::vector<double> snapshot_times;
    std::string direction;
    std::string out = ".";
};

int run_evolve(const evolve_opts& o) {
    const model m = load_model(o.model_spec);
    experiment_config cfg;
    cfg.L = o.L;
    cfg.n = o.n;
    cfg.T = o.T;
    cfg.dt = o.dt;
    cfg.dt_safety = o.dt_safety;
    cfg.perturbation = {o.delta, o.center, o.width};
    cfg.sample_stride = o.sample_stride;
    cfg.growth_factor = o.growth_factor;
    cfg.stop_on_growth = !o.no_stop_on_growth;
    cfg.snapshot_times = o.snapshot_times;
    cfg.direction = parse_direction(o.direction);

    const auto res =
        run_instability_experiment(m, wave_parameters{o.v_star, o.u_star, o.c}, cfg);

    const auto dir = prepare_out_dir(o.out);
    io::write_diagnostics_csv((dir / "diagnostics.csv").string(), res.rows);

    auto summary = io::summary_to_json(res, cfg);
    auto snaps = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", i);
        io::write_snapshot_csv((dir / name).string(), res.snapshots[i]);
        snaps.push_back({{"t", res.snapshots[i].t}, {"file", name}});
    }
    summary["snapshots"] = snaps;
    io::write_json((dir / "summary.json").string(), summary);

    std::cout << "seam_mismatch = " << io::fmt(res.seam_mismatch) << "\n"
              << "dt = " << io::fmt(res.dt_initial) << "\n"
              << "steps = " << res.steps << "\n"
              << "d0 = " << io::fmt(res.growth.d0) << "\n"
              << "d_max = " << io::fmt(res.growth.d_max) << "\n";
    if (res.growth.crossing_time)
        std::cout << "growth: crossed " << io::fmt(res.growth.factor) << "*d0 at t="
                  << io::fmt(*res.growth.crossing_time) << "\n";
    else
        std::cout << "growth: none\n";
    std::cout << "wrote " << (dir / "diagnostics.csv").string() << " and "
              << (dir / "summary.json").string() << "\n";

    if (res.aborted) {
        std::cerr << "run aborted at t=" << io::fmt(res.last_good_t) << ": "
                  << res.abort_reason << "\n";
        return 3;
    }
    return 0;
}

// ------------------------------------------------------------
// models
// ------------------------------------------------------------

int run_models() {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    j.push_back({{"name", "bona-sachs"},
                 {"p", "-v + v^q"},
                 {"kappa", "1"},
                 {"params", {{"q", "integer, q >= 2 (default 2)"}}},
                 {"domain", "all v"}});
    j.push_back({{"name", "gross-pitaevskii"},
                 {"p", "alpha/v^2 - beta/v^3"},
                 {"kappa", "1/(4*v^4)"},
                 {"params",
                  {{"alpha", "alpha > 0 (default 1)"}, {"beta", "beta > 0 (default 1)"}}},
                 {"domain", "v > 0"}});
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solitary-wave toolkit for the Euler-Korteweg system"};
    app.require_subcommand(1);

    analyze_opts ao;
    auto* analyze = app.add_subcommand("analyze", "moment of instability and verdicts");
    analyze->add_option("--model", ao.model_spec, "model selector or model file")->required();
    analyze->add_option("--vstar", ao.v_star, "base state v*");
    analyze->add_option("--ustar", ao.u_star, "base state u*");
    analyze->add_option("--c", ao.speeds, "wave speed (repeatable)");
    analyze->add_option("--c-range", ao.c_range, "speed grid lo:hi:count");
    analyze->add_option("--direction", ao.direction, "elevation|depression")
        ->check(CLI::IsMember({"elevation", "depression"}));
    analyze->add_option("--out", ao.out, "output directory");
    analyze->add_option("--tol-quad", ao.tol_quad, "quadrature absolute tolerance");
    analyze->add_option("--tol-root", ao.tol_root, "root-finding relative tolerance");

    profile_opts po;
    auto* prof = app.add_subcommand("profile", "reconstruct a solitary-wave profile");
    prof->add_option("--model", po.model_spec, "model selector or model file")->required();
    prof->add_option("--vstar", po.v_star, "base state v*");
    prof->add_option("--ustar", po.u_star, "base state u*");
    prof->add_option("--c", po.c, "wave speed");
    prof->add_option("--points", po.points, "output grid points");
    prof->add_option("--xi-max", po.xi_max, "half-width of the output grid (0 = auto)");
    prof->add_option("--direction", po.direction, "elevation|depression")
        ->check(CLI::IsMember({"elevation", "depression"}));
    prof->add_option("--out", po.out, "output directory");
    prof->add_option("--tol-root", po.tol_root, "root-finding relative tolerance");

    evolve_opts eo;
    auto* evolve = app.add_subcommand("evolve", "periodic-domain spectral RK4 evolution");
    evolve->add_option("--model", eo.model_spec, "model selector or model file")->required();
    evolve->add_option("--vstar", eo.v_star, "base state v*");
    evolve->add_option("--ustar", eo.u_star, "base state u*");
    evolve->add_option("--c", eo.c, "wave speed");
    evolve->add_option("--L", eo.L, "half-domain length");
    evolve->add_option("--n", eo.n, "grid size (power of two)");
    evolve->add_option("--T", eo.T, "time horizon");
    evolve->add_option("--dt", eo.dt, "time step (0 = auto stability rule)");
    evolve->add_option("--dt-safety", eo.dt_safety, "safety factor C in the dt rule");
    evolve->add_option("--delta", eo.delta, "perturbation amplitude (0 = none)");
    evolve->add_option("--center", eo.center, "perturbation center (0 = auto L/8)");
    evolve->add_option("--width", eo.width, "perturbation width (0 = auto L/20)");
    evolve->add_option("--sample-stride", eo.sample_stride,
                       "steps between diagnostics rows (0 = auto)");
    evolve->add_option("--growth-factor", eo.growth_factor, "crossing threshold factor");
    evolve->add_flag("--no-stop-on-growth", eo.no_stop_on_growth,
                     "keep integrating after the growth crossing");
    evolve->add_option("--snapshot", eo.snapshot_times, "snapshot time (repeatable)");
    evolve->add_option("--direction", eo.direction, "elevation|depression")
        ->check(CLI::IsMember({"elevation", "depression"}));
    evolve->add_option("--out", eo.out, "output directory");

    auto* models = app.add_subcommand("models", "list built-in model families");

    int rc = 0;
    analyze->callback([&]() { rc = run_analyze(ao); });
    prof->callback([&]() { rc = run_profile(po); });
    evolve->callback([&]() { rc = run_evolve(eo); });
    models->callback([&]() { rc = run_models(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 64;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const no_solitary_wave& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sonic_degenerate& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ek_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
