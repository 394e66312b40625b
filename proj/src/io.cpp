#include "ekwave/io.hpp"

#include <cstdio>
#include <fstream>

#include "ekwave/errors.hpp"

namespace ekwave::io {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw config_error("cannot open output file: " + path);
    return f;
}

const char* direction_name(wave_direction d) {
    return d == wave_direction::elevation ? "elevation" : "depression";
}

}  // namespace

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_profile_csv(const std::string& path, const profile& p) {
    auto f = open_out(path);
    f << "xi,v,v_prime,u\n";
    for (std::size_t j = 0; j < p.xi.size(); ++j)
        f << fmt(p.xi[j]) << ',' << fmt(p.v[j]) << ',' << fmt(p.v_prime[j]) << ','
          << fmt(p.u[j]) << '\n';
}

void write_moment_curve_csv(const std::string& path, const std::vector<moment_report>& rows) {
    auto f = open_out(path);
    f << "c,m,m_prime,m_second,verdict,status\n";
    for (const auto& r : rows)
        f << fmt(r.c) << ',' << fmt(r.m) << ',' << fmt(r.m_prime) << ',' << fmt(r.m_second)
          << ',' << (r.verdict ? to_string(*r.verdict) : "None") << ','
          << to_string(r.status) << '\n';
}

void write_diagnostics_csv(const std::string& path, const std::vector<diagnostics_row>& rows) {
    auto f = open_out(path);
    f << "t,orbital_distance,mass,momentum,hamiltonian\n";
    for (const auto& r : rows)
        f << fmt(r.t) << ',' << fmt(r.orbital_distance) << ',' << fmt(r.mass) << ','
          << fmt(r.momentum) << ',' << fmt(r.hamiltonian) << '\n';
}

void write_snapshot_csv(const std::string& path, const field_snapshot& s) {
    auto f = open_out(path);
    f << "y,V,U\n";
    for (std::size_t j = 0; j < s.y.size(); ++j)
        f << fmt(s.y[j]) << ',' << fmt(s.V[j]) << ',' << fmt(s.U[j]) << '\n';
}

nlohmann::ordered_json report_to_json(const moment_report& r) {
    nlohmann::ordered_json j;
    j["c"] = r.c;
    j["v_star"] = r.v_star;
    j["u_star"] = r.u_star;
    j["status"] = to_string(r.status);
    j["status_detail"] = r.status_detail;
    if (r.direction)
        j["direction"] = direction_name(*r.direction);
    else
        j["direction"] = nullptr;
    j["v_m"] = r.v_m;
    j["v_m_prime"] = r.v_m_prime;
    j["m"] = r.m;
    j["m_prime"] = r.m_prime;
    j["m_second"] = r.m_second;
    j["quadrature_error_estimates"] = {
        {"m", r.errors.m}, {"m_prime", r.errors.m_prime}, {"m_second", r.errors.m_second}};
    if (r.verdict)
        j["verdict"] = to_string(*r.verdict);
    else
        j["verdict"] = nullptr;
    j["near_zero_second"] = r.near_zero_second;
    j["theorem_inconsistency"] = r.theorem_inconsistency;
    j["large_error"] = r.large_error;
    return j;
}

nlohmann::ordered_json model_to_json(const model& m) {
    nlohmann::ordered_json j;
    j["name"] = m.name();
    j["p"] = m.p_formula();
    j["kappa"] = m.kappa_formula();
    const auto& dom = m.domain();
    j["domain"] = {{"lo", std::isfinite(dom.lo) ? nlohmann::ordered_json(dom.lo)
                                                : nlohmann::ordered_json(nullptr)},
                   {"hi", std::isfinite(dom.hi) ? nlohmann::ordered_json(dom.hi)
                                                : nlohmann::ordered_json(nullptr)}};
    return j;
}

nlohmann::ordered_json summary_to_json(const experiment_result& r,
                                       const experiment_config& cfg) {
    nlohmann::ordered_json j;
    j["config"] = {{"L", cfg.L},
                   {"n", cfg.n},
                   {"T", cfg.T},
                   {"dt", cfg.dt},
                   {"dt_safety", cfg.dt_safety},
                   {"delta", cfg.perturbation.amplitude},
                   {"growth_factor", cfg.growth_factor}};
    j["seam_mismatch"] = r.seam_mismatch;
    j["dt_initial"] = r.dt_initial;
    j["steps"] = r.steps;
    j["final_t"] = r.final_t;
    j["aborted"] = r.aborted;
    if (r.aborted) {
        j["abort_reason"] = r.abort_reason;
        j["last_good_t"] = r.last_good_t;
    }
    j["d0"] = r.growth.d0;
    j["d_max"] = r.growth.d_max;
    j["t_d_max"] = r.growth.t_d_max;
    j["growth"] = r.growth.crossing_time ? "crossed" : "none";
    if (r.growth.crossing_time)
        j["crossing_time"] = *r.growth.crossing_time;
    else
        j["crossing_time"] = nullptr;
    j["growth_tracked"] = r.growth.tracked;
    return j;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

}  // namespace ekwave::io
