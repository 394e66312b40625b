#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ekwave/fourier.hpp"
#include "ekwave/model.hpp"
#include "ekwave/profile.hpp"

namespace ekwave {

// ============================================================
// State and configuration
// ============================================================

struct evolution_state {
    double t = 0.0;
    std::vector<double> V, U;
};

struct perturbation_config {
    double amplitude = 0.0;  // delta; 0 disables the perturbation
    double center = 0.0;     // bump center (0 = auto: L/8)
    double width = 0.0;      // Gaussian width (0 = auto: L/20)
};

struct experiment_config {
    double L = 40.0;
    int n = 1024;
    double T = 20.0;
    double dt = 0.0;          // 0 = auto from the stability rule
    double dt_safety = 0.5;   // C in dt = C dy^2 / (pi^2 sqrt(kappa_max))
    perturbation_config perturbation;
    int sample_stride = 0;    // steps between diagnostics rows (0 = auto, ~0.1 time units)
    double growth_factor = 10.0;
    bool stop_on_growth = true;
    std::vector<double> snapshot_times;
    double seam_tolerance = 1e-8;
    std::optional<wave_direction> direction;
};

struct diagnostics_row {
    double t = 0.0;
    double orbital_distance = 0.0;
    double mass = 0.0;
    double momentum = 0.0;
    double hamiltonian = 0.0;
    double shift = 0.0;  // minimizing translation (not exported to CSV)
};

struct field_snapshot {
    double t = 0.0;
    std::vector<double> y, V, U;
};

struct conserved_quantities {
    double mass = 0.0;        // integral of V - v_star
    double momentum = 0.0;    // integral of U - u_star
    double hamiltonian = 0.0;
};

// ============================================================
// Spectral evolver for Eq. (1):
//   V_t = U_y,   U_t = -( p(V) + kappa(V) V_yy + kappa'(V) V_y^2 / 2 )_y
// ============================================================
//
// The linearization about (v_star, u_star) is advanced unfiltered; only the
// nonlinear remainder is dealiased (2/3 rule), so the stiff dispersive part
// keeps its physical growth rate when dt violates the stability bound.
class evolver {
public:
    evolver(const model& m, const wave_parameters& params, double L, int n);

    const spectral_grid& grid() const { return grid_; }
    const model& equations() const { return model_; }
    const wave_parameters& base_state() const { return params_; }

    void rhs(const std::vector<double>& V, const std::vector<double>& U,
             std::vector<double>& Vt, std::vector<double>& Ut) const;

    // Classical RK4; throws run_aborted on non-finite fields or domain escape.
    void step_rk4(evolution_state& state, double dt) const;

    conserved_quantities conserved(const evolution_state& state) const;

    double kappa_max(const std::vector<double>& V) const;
    double dt_rule(double kappa_max_value, double safety = 0.5) const;

private:
    model model_;
    wave_parameters params_;
    spectral_grid grid_;
    double p_star_, p_prime_star_, kappa_star_;

    // scratch (methods are const; a single evolver is not thread-safe)
    mutable std::vector<std::complex<double>> vh_, uh_, th_;
    mutable std::vector<double> vy_, vyy_, nl_;
    mutable std::vector<double> sv_, su_, k1v_, k1u_, k2v_, k2u_, k3v_, k3u_, k4v_, k4u_;
};

// ============================================================
// Periodization of a solitary profile
// ============================================================

// Samples (v, u) on the periodic grid.  The seam mismatch is the residual
// |v(-L) - v_star| (and its u counterpart) relative to the wave amplitude;
// above `tol` the domain cannot carry the profile and config_error is thrown.
struct periodized_state {
    evolution_state state;
    double seam_mismatch = 0.0;
};

periodized_state periodize(const profile& p, double L, int n, double tol = 1e-8);

// Mean-zero Gaussian bump (exactly mass-free perturbation shape).
std::vector<double> gaussian_bump(const spectral_grid& g, double amplitude, double center,
                                  double width);

// ============================================================
// Orbital distance (Definition 1): inf over shifts of ||.||_{H1 x L2}
// ============================================================

class orbital_distance {
public:
    orbital_distance(const spectral_grid& g, const std::vector<double>& v_ref,
                     const std::vector<double>& u_ref);

    struct result {
        double distance = 0.0;
        double shift = 0.0;  // minimizing sigma: state ~ reference(. + sigma)
    };
    result operator()(const std::vector<double>& V, const std::vector<double>& U) const;

private:
    const spectral_grid& grid_;
    std::vector<double> weight_v_, weight_u_;  // Parseval weights, H1 resp. L2
    std::vector<std::complex<double>> vref_hat_, uref_hat_;
    mutable std::vector<std::complex<double>> vh_, uh_, corr_;
    mutable std::vector<double> corr_real_;
};

// ============================================================
// Instability experiment
// ============================================================

struct growth_summary {
    double d0 = 0.0;     // orbital distance right after perturbation
    double d_max = 0.0;
    double t_d_max = 0.0;
    std::optional<double> crossing_time;  // first sampled t with d >= factor*d0
    double factor = 10.0;
    bool tracked = false;  // growth threshold only meaningful when perturbed
};

struct experiment_result {
    std::vector<diagnostics_row> rows;
    std::vector<field_snapshot> snapshots;
    growth_summary growth;
    double seam_mismatch = 0.0;
    double dt_initial = 0.0;
    long steps = 0;
    double final_t = 0.0;
    bool aborted = false;
    std::string abort_reason;
    double last_good_t = 0.0;
};

experiment_result run_instability_experiment(const model& m, const wave_parameters& params,
                                             const experiment_config& cfg);

}  // namespace ekwave
