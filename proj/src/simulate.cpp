#include "hopflyap/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hopflyap/errors.hpp"
#include "hopflyap/hopf.hpp"
#include "hopflyap/lyapunov.hpp"

namespace hopflyap {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;

}  // namespace

OdeSolution integrate_ode(const OdeRhs& rhs, std::vector<double> y, double t0, double t1,
                          double tol, double out_dt) {
    if (!(t1 > t0)) throw DomainError("integrate_ode: t_final must exceed t0");
    if (!(tol >= 1e-12 && tol <= 1e-4)) throw DomainError("integrate_ode: tol must lie in [1e-12, 1e-4]");
    if (!(out_dt > 0.0)) throw DomainError("integrate_ode: out_dt must be positive");

    const std::size_t n = y.size();
    std::array<std::vector<double>, 7> k;
    for (auto& v : k) v.assign(n, 0.0);
    std::vector<double> tmp(n), ynew(n), err(n);
    std::array<std::vector<double>, 5> cont;
    for (auto& v : cont) v.assign(n, 0.0);

    OdeSolution sol;
    sol.times.push_back(t0);
    sol.states.push_back(y);
    double next_out = t0 + out_dt;
    long out_index = 1;

    double t = t0;
    // Steps never exceed the output spacing. Near an equilibrium the error
    // estimate vanishes and the step would otherwise grow past the stability
    // limit, letting round-off grow up to the tolerance.
    const double hmax = out_dt;
    double h = std::min({1e-2, (t1 - t0) / 100.0, hmax});
    double facold = 1e-4;
    rhs(t, y, k[0]);

    auto stage = [&](double tc, std::initializer_list<std::pair<int, double>> terms,
                     std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = y[i];
            for (const auto& [idx, coef] : terms) s += h * coef * k[idx][i];
            tmp[i] = s;
        }
        rhs(tc, tmp, out);
    };

    while (t < t1) {
        if (t + h > t1) h = t1 - t;
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            throw IntegrationError("integrate_ode: step size underflow", t);
        }
        stage(t + c2 * h, {{0, a21}}, k[1]);
        stage(t + c3 * h, {{0, a31}, {1, a32}}, k[2]);
        stage(t + c4 * h, {{0, a41}, {1, a42}, {2, a43}}, k[3]);
        stage(t + c5 * h, {{0, a51}, {1, a52}, {2, a53}, {3, a54}}, k[4]);
        stage(t + h, {{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}}, k[5]);
        for (std::size_t i = 0; i < n; ++i) {
            ynew[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] +
                                  a76 * k[5][i]);
        }
        rhs(t + h, ynew, k[6]);

        double errnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                                  e6 * k[5][i] + e7 * k[6][i]);
            const double sc = tol * (1.0 + std::max(std::abs(y[i]), std::abs(ynew[i])));
            errnorm = std::max(errnorm, std::abs(e) / sc);
        }
        if (!std::isfinite(errnorm)) {
            h *= 0.1;
            ++sol.rejected_steps;
            continue;
        }

        const double fac11 = std::pow(std::max(errnorm, 1e-300), kExpo);
        if (errnorm <= 1.0) {
            // Dense output over [t, t + h].
            for (std::size_t i = 0; i < n; ++i) {
                cont[0][i] = y[i];
                cont[1][i] = ynew[i] - y[i];
                cont[2][i] = h * k[0][i] - cont[1][i];
                cont[3][i] = cont[1][i] - h * k[6][i] - cont[2][i];
                cont[4][i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                                  d6 * k[5][i] + d7 * k[6][i]);
            }
            const double tnew = (t + h >= t1) ? t1 : t + h;
            while (next_out < tnew - 1e-12 * out_dt) {
                const double th = (next_out - t) / h;
                const double th1 = 1.0 - th;
                std::vector<double> s(n);
                for (std::size_t i = 0; i < n; ++i) {
                    s[i] = cont[0][i] +
                           th * (cont[1][i] +
                                 th1 * (cont[2][i] + th * (cont[3][i] + th1 * cont[4][i])));
                }
                sol.times.push_back(next_out);
                sol.states.push_back(std::move(s));
                ++out_index;
                next_out = t0 + static_cast<double>(out_index) * out_dt;
            }

            facold = std::max(errnorm, 1e-4);
            t = tnew;
            y.swap(ynew);
            k[0].swap(k[6]);
            ++sol.accepted_steps;
            double fac = fac11 / std::pow(facold, kBeta);
            fac = std::clamp(fac / kSafety, 0.2, 10.0);
            h = std::min(h / fac, hmax);
        } else {
            ++sol.rejected_steps;
            h /= std::min(10.0, fac11 / kSafety);
        }
    }
    sol.times.push_back(t1);
    sol.states.push_back(y);
    return sol;
}

Trajectory integrate(const ModelParams& p, const StateVec& init, double t_final, double tol,
                     double out_dt) {
    p.validate();
    for (double v : init) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError("integrate: initial state must be finite and nonnegative");
        }
    }
    if (out_dt <= 0.0) {
        double omega = 1.0;
        try {
            omega = omega0_of(p.mu, p.epsilon);
        } catch (const DomainError&) {
        }
        out_dt = 2.0 * std::numbers::pi / omega / 64.0;
    }
    const OdeRhs rhs = [&p](double, std::span<const double> y, std::span<double> dy) {
        const StateVec f = eval_field({y[0], y[1], y[2], y[3]}, p);
        std::copy(f.begin(), f.end(), dy.begin());
    };
    const OdeSolution sol =
        integrate_ode(rhs, std::vector<double>(init.begin(), init.end()), 0.0, t_final, tol, out_dt);

    Trajectory traj;
    traj.params = p;
    traj.times = sol.times;
    traj.states.reserve(sol.states.size());
    for (const auto& s : sol.states) traj.states.push_back({s[0], s[1], s[2], s[3]});
    return traj;
}

namespace {

struct Extremum {
    double t;
    double v;
};

// Three-point local extrema with parabolic refinement. sign = +1 for maxima.
std::vector<Extremum> extrema(std::span<const double> t, std::span<const double> v, int sign) {
    std::vector<Extremum> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double a = sign * v[i - 1], b = sign * v[i], c = sign * v[i + 1];
        if (!(b > a && b >= c)) continue;
        const double curv = a - 2.0 * b + c;
        double delta = 0.0;
        if (curv != 0.0) delta = 0.5 * (a - c) / curv;
        delta = std::clamp(delta, -1.0, 1.0);
        const double dt = delta >= 0.0 ? t[i + 1] - t[i] : t[i] - t[i - 1];
        out.push_back({t[i] + delta * dt, sign * (b - 0.25 * (a - c) * delta)});
    }
    return out;
}

}  // namespace

CycleEstimate detect_cycle_signal(std::span<const double> times, std::span<const double> values,
                                  double transient_fraction) {
    if (times.size() != values.size() || times.size() < 2) {
        throw InsufficientDataError("detect_cycle: need at least two samples");
    }
    if (!(transient_fraction > 0.0 && transient_fraction < 1.0)) {
        throw DomainError("detect_cycle: transient_fraction must lie in (0, 1)");
    }
    CycleEstimate est;
    est.transient_fraction = transient_fraction;

    const double t_cut = times.front() + transient_fraction * (times.back() - times.front());
    const auto first = static_cast<std::size_t>(
        std::lower_bound(times.begin(), times.end(), t_cut) - times.begin());
    const auto t = times.subspan(first);
    const auto v = values.subspan(first);
    if (v.size() < 3) throw InsufficientDataError("detect_cycle: too few post-transient samples");

    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (*hi - *lo <= 1e-9 * (1.0 + std::abs(mean))) {
        est.equilibrium = true;
        return est;
    }

    const auto peaks = extrema(t, v, +1);
    const auto troughs = extrema(t, v, -1);
    est.peaks = static_cast<int>(peaks.size());
    if (peaks.size() < 5 || troughs.size() < 5) {
        throw InsufficientDataError("detect_cycle: fewer than 5 post-transient peaks");
    }

    auto mean_of = [](const std::vector<Extremum>& e) {
        double s = 0.0;
        for (const auto& x : e) s += x.v;
        return s / static_cast<double>(e.size());
    };
    est.amplitude = 0.5 * (mean_of(peaks) - mean_of(troughs));
    est.period = (peaks.back().t - peaks.front().t) / static_cast<double>(peaks.size() - 1);

    // Per-cycle amplitudes over the last five cycles, each peak paired with the
    // trough that follows it.
    std::vector<double> amps;
    for (auto it = peaks.rbegin(); it != peaks.rend() && amps.size() < 5; ++it) {
        const auto tr = std::find_if(troughs.begin(), troughs.end(),
                                     [&](const Extremum& e) { return e.t > it->t; });
        if (tr == troughs.end()) continue;
        amps.push_back(0.5 * (it->v - tr->v));
    }
    if (amps.size() == 5) {
        const auto [amin, amax] = std::minmax_element(amps.begin(), amps.end());
        const double amean = std::accumulate(amps.begin(), amps.end(), 0.0) / 5.0;
        est.drift = (*amax - *amin) / amean;
        est.converged = est.drift <= 0.02;
    }
    return est;
}

CycleEstimate detect_cycle(const Trajectory& traj, double transient_fraction) {
    std::vector<double> y;
    y.reserve(traj.states.size());
    for (const auto& s : traj.states) y.push_back(s[1]);
    return detect_cycle_signal(traj.times, y, transient_fraction);
}

ScanResult amplitude_scan(double epsilon, const std::vector<double>& offsets,
                          const ScanOptions& options) {
    ScanResult result;
    result.epsilon = epsilon;
    const HopfPoint hopf = solve_hopf_mu(epsilon, mu0_radical(), options.k);
    result.mu_h = hopf.mu_h;
    result.omega0 = hopf.omega0;

    // Perturbation direction: Re(q) at the Hopf point, scaled so that its y
    // component is `perturbation` times y0.
    const EigenData eig = eigen_data(equilibrium_jacobian(hopf.mu_h, epsilon, options.k), hopf.omega0);
    StateVec dir{};
    for (int i = 0; i < 4; ++i) dir[i] = eig.q[i].real();

    for (double off : offsets) {
        ScanRow row;
        row.offset = off;
        row.mu = hopf.mu_h + off;
        try {
            const ModelParams p = ModelParams::make(row.mu, epsilon, options.k);
            const StateVec P0 = equilibrium(row.mu, epsilon).point;
            row.leading_real_part = full_spectrum(row.mu, epsilon, options.k)[0].real();
            const double kick = options.perturbation * P0[1];
            StateVec init = P0;
            for (int i = 0; i < 4; ++i) init[i] += kick * dir[i] / std::abs(dir[1]);
            const Trajectory traj = integrate(p, init, options.t_final, options.tol);
            const CycleEstimate est = detect_cycle(traj, options.transient_fraction);
            row.estimate = est;
            row.samples = traj.times.size();
            row.final_state = traj.states.back();
            row.raw_amplitude = est.amplitude;
            row.period = est.period;
            row.cycle = est.converged && !est.equilibrium && est.amplitude > 2.0 * kick;
            row.amplitude = row.cycle ? est.amplitude : 0.0;
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

ScanSummary summarize_scan(const ScanResult& scan, double a) {
    ScanSummary s;
    std::vector<const ScanRow*> cyc;
    bool all_unstable = true;
    for (const auto& r : scan.rows) {
        if (!r.ok() || !r.cycle) continue;
        cyc.push_back(&r);
        (r.offset < 0.0 ? s.cycles_below : s.cycles_above)++;
        if (!(r.leading_real_part > 0.0)) all_unstable = false;
    }
    s.one_sided = (s.cycles_below > 0) != (s.cycles_above > 0);
    s.cycles_on_unstable_side = !cyc.empty() && all_unstable;

    if (cyc.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(cyc.size());
        for (const auto* r : cyc) {
            const double lx = std::log(std::abs(r->offset));
            const double ly = std::log(r->amplitude);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        s.loglog_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    if (!cyc.empty()) {
        const auto* nearest = *std::min_element(cyc.begin(), cyc.end(), [](auto* x, auto* y) {
            return std::abs(x->offset) < std::abs(y->offset);
        });
        s.period_ratio = nearest->period / (2.0 * std::numbers::pi / scan.omega0);
    }
    if (s.one_sided && s.cycles_on_unstable_side) {
        s.criticality = a < 0.0 ? "supercritical" : "undetermined";
    } else if (s.one_sided) {
        s.criticality = a > 0.0 ? "subcritical" : "undetermined";
    } else {
        s.criticality = "undetermined";
    }
    return s;
}

}  // namespace hopflyap
