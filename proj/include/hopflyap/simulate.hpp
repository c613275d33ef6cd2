#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hopflyap/model.hpp"

namespace hopflyap {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct OdeSolution {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    long accepted_steps = 0;
    long rejected_steps = 0;
};

// Dormand-Prince 5(4) with PI step control. The local error of every
// accepted step satisfies |err_i| <= tol (1 + |y_i|). Output is sampled from
// the continuous extension on the grid t0, t0 + out_dt, ..., t1 (t1 always
// included); out_dt also caps the step. Throws IntegrationError on step-size
// underflow.
OdeSolution integrate_ode(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                          double tol, double out_dt);

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVec> states;
    ModelParams params;
};

// Integrates the model from `init`. out_dt <= 0 selects 64 samples per
// linear period 2 pi / omega0(mu, eps).
Trajectory integrate(const ModelParams& p, const StateVec& init, double t_final, double tol,
                     double out_dt = 0.0);

struct CycleEstimate {
    double amplitude = 0.0;  // half peak-to-trough of y
    double period = 0.0;     // mean peak spacing
    bool converged = false;  // amplitude drift over the last 5 cycles <= 2%
    bool equilibrium = false;
    double transient_fraction = 0.5;
    double drift = 0.0;
    int peaks = 0;
};

// Peak analysis of a sampled signal after discarding the leading
// transient_fraction of the time span. Throws InsufficientDataError when
// fewer than 5 peaks remain.
CycleEstimate detect_cycle_signal(std::span<const double> times, std::span<const double> values,
                                  double transient_fraction = 0.5);

// Same, on the y coordinate of a trajectory.
CycleEstimate detect_cycle(const Trajectory& traj, double transient_fraction = 0.5);

struct ScanOptions {
    double k = 0.0;
    double t_final = 3000.0;
    double tol = 1e-9;
    double perturbation = 1e-3;  // relative to y0, along Re(q)
    double transient_fraction = 0.5;
};

struct ScanRow {
    double offset = 0.0;
    double mu = 0.0;
    double amplitude = 0.0;  // 0 where the equilibrium is stable
    double period = 0.0;
    bool cycle = false;
    double raw_amplitude = 0.0;
    double leading_real_part = 0.0;  // Re of the critical pair at mu
    CycleEstimate estimate;
    std::size_t samples = 0;
    StateVec final_state{};
    std::string error;
    bool ok() const { return error.empty(); }
};

struct ScanResult {
    double epsilon = 0.0;
    double mu_h = 0.0;
    double omega0 = 0.0;
    std::vector<ScanRow> rows;
};

ScanResult amplitude_scan(double epsilon, const std::vector<double>& offsets,
                          const ScanOptions& options = {});

struct ScanSummary {
    int cycles_below = 0;  // offsets < 0
    int cycles_above = 0;
    bool one_sided = false;
    bool cycles_on_unstable_side = false;
    double loglog_slope = 0.0;  // amplitude vs |offset| on the cycle side
    double period_ratio = 0.0;  // period at the smallest cycle offset / (2 pi / omega0)
    std::string criticality;    // "supercritical", "subcritical" or "undetermined"
};

// Combines the scan with the sign of the Lyapunov coefficient a.
ScanSummary summarize_scan(const ScanResult& scan, double a);

}  // namespace hopflyap
