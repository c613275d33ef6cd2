#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hopflyap/acceptance.hpp"
#include "hopflyap/asymptotics.hpp"
#include "hopflyap/errors.hpp"
#include "hopflyap/hopf.hpp"
#include "hopflyap/lyapunov.hpp"
#include "hopflyap/simulate.hpp"

namespace hopflyap::cli {

using nlohmann::ordered_json;

namespace {

constexpr int kCsvDigits = 17;
constexpr int kTableDigits = 12;

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

// Writes to cfg.output_path when set, otherwise to out.
class Sink {
public:
    Sink(const RunConfig& cfg, std::ostream& out) : out_(out) {
        if (!cfg.output_path.empty()) {
            file_.open(cfg.output_path, std::ios::binary);
            if (!file_) throw UsageError("cannot open output file " + cfg.output_path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : out_; }

private:
    std::ostream& out_;
    std::ofstream file_;
};

std::vector<double> eps_or(const RunConfig& cfg, std::vector<double> fallback) {
    return cfg.eps_list.empty() ? fallback : cfg.eps_list;
}

}  // namespace

std::string format_number(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

void validate(const RunConfig& cfg) {
    if (cfg.format && *cfg.format != "csv" && *cfg.format != "json")
        throw UsageError("format must be csv or json, got '" + *cfg.format + "'");
    for (double e : cfg.eps_list)
        if (!(e > 0.0 && e <= 0.1))
            throw UsageError("eps entries must lie in (0, 0.1], got " + format_number(e, kTableDigits));
    if (!std::isfinite(cfg.k) || cfg.k < 0.0) throw UsageError("k must be finite and >= 0");
    if (!(cfg.t_final > 0.0)) throw UsageError("t-final must be positive");
}

void load_config_json(const std::string& text, RunConfig& cfg) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (!j.is_object()) throw UsageError("config must be a JSON object");
        for (const auto& [key, v] : j.items()) {
            if (key == "k") cfg.k = v.get<double>();
            else if (key == "eps_list") cfg.eps_list = v.get<std::vector<double>>();
            else if (key == "mu_guess") cfg.mu_guess = v.get<double>();
            else if (key == "output_path") cfg.output_path = v.get<std::string>();
            else if (key == "format") cfg.format = v.get<std::string>();
            else if (key == "quick") cfg.quick = v.get<bool>();
            else if (key == "mu_offset") cfg.mu_offset = v.get<double>();
            else if (key == "t_final") cfg.t_final = v.get<double>();
            else throw UsageError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& ex) {
        throw UsageError(std::string("bad config: ") + ex.what());
    }
}

int cmd_asymptotics(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    validate(cfg);
    asymptotics::AsymptoticCoeffs c;
    try {
        c = asymptotics::compute_all(cfg.k);
    } catch (const ConsistencyError& ex) {
        err << "consistency failure: " << ex.what() << '\n';
        return kConsistencyFailure;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kComputationFailure;
    }
    const std::vector<std::pair<const char*, double>> fields{
        {"mu0", c.mu0},       {"mu1", c.mu1},       {"mu2", c.mu2},     {"mu3", c.mu3},
        {"b1", c.b1},         {"b2", c.b2},         {"b3", c.b3},       {"d1_0", c.d1_0},
        {"d2_0", c.d2_0},     {"alpha_T", c.alpha_T}, {"x_T", c.x_T},   {"beta1", c.beta1},
        {"beta2", c.beta2},   {"beta3", c.beta3},   {"beta4", c.beta4}, {"beta5", c.beta5},
        {"x_norm", c.x_norm}, {"y_norm", c.y_norm}, {"D_re", c.D.real()}, {"D_im", c.D.imag()},
        {"E", c.E},           {"F", c.F},           {"ell1", c.ell1},   {"ell2", c.ell2},
        {"k1", c.k1},         {"k2", c.k2},         {"re_z", c.re_z},   {"a0", c.a0}};

    Sink sink(cfg, out);
    auto& o = sink.stream();
    if (!cfg.format) {
        for (const auto& [name, v] : fields) {
            if (std::string(name) == "D_im") continue;
            if (std::string(name) == "D_re") {
                o << "D = " << format_number(c.D.real(), kTableDigits)
                  << (c.D.imag() < 0 ? " - " : " + ")
                  << format_number(std::abs(c.D.imag()), kTableDigits) << "i\n";
                continue;
            }
            o << name << " = " << format_number(v, kTableDigits) << '\n';
        }
    } else if (*cfg.format == "csv") {
        o << "name,value\n";
        for (const auto& [name, v] : fields) o << name << ',' << format_number(v, kCsvDigits) << '\n';
    } else {
        ordered_json j = ordered_json::object();
        for (const auto& [name, v] : fields) {
            const std::string n = name;
            if (n == "D_re") j["D"] = {{"re", c.D.real()}, {"im", c.D.imag()}};
            else if (n != "D_im") j[n] = v;
        }
        o << j.dump(2) << '\n';
    }
    return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    validate(cfg);
    if (cfg.eps_list.empty()) throw UsageError("sweep needs a nonempty --eps list");
    std::vector<double> eps = cfg.eps_list;
    std::stable_sort(eps.begin(), eps.end(), std::greater<>());
    const auto rows = lyapunov_vs_eps(eps, cfg.k, cfg.mu_guess);
    const double a0 = asymptotics::a0_closed_form(cfg.k);

    Sink sink(cfg, out);
    auto& o = sink.stream();
    bool all_ok = true;
    if (cfg.format.value_or("csv") == "csv") {
        o << "eps,mu_h,omega0,a,abs_err_vs_a0\n";
        for (const auto& r : rows) {
            o << format_number(r.epsilon, kCsvDigits);
            if (r.ok()) {
                o << ',' << format_number(r.mu_h, kCsvDigits) << ','
                  << format_number(r.omega0, kCsvDigits) << ',' << format_number(r.a, kCsvDigits)
                  << ',' << format_number(std::abs(r.a - a0), kCsvDigits);
            } else {
                all_ok = false;
                const std::string tag = "ERROR:" + csv_safe(r.error);
                for (int i = 0; i < 4; ++i) o << ',' << tag;
            }
            o << '\n';
        }
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json j;
            j["eps"] = r.epsilon;
            if (r.ok()) {
                j["mu_h"] = r.mu_h;
                j["omega0"] = r.omega0;
                j["a"] = r.a;
                j["abs_err_vs_a0"] = std::abs(r.a - a0);
            } else {
                all_ok = false;
                j["error"] = "ERROR:" + r.error;
            }
            arr.push_back(j);
        }
        o << arr.dump(2) << '\n';
    }
    for (const auto& r : rows)
        if (!r.ok()) err << "eps " << format_number(r.epsilon, kTableDigits) << ": " << r.error << '\n';
    return all_ok ? kOk : kComputationFailure;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    validate(cfg);
    const double eps = eps_or(cfg, {1e-3}).front();
    ScanOptions opt;
    opt.k = cfg.k;
    opt.t_final = cfg.t_final;
    ScanResult scan;
    try {
        scan = amplitude_scan(eps, {cfg.mu_offset}, opt);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kComputationFailure;
    }
    const ScanRow& r = scan.rows.front();
    if (!r.ok()) {
        err << "integration failure: " << r.error << '\n';
        return kComputationFailure;
    }
    const CycleEstimate& e = r.estimate;
    const std::vector<std::pair<const char*, double>> fields{
        {"eps", scan.epsilon},     {"mu_h", scan.mu_h},        {"omega0", scan.omega0},
        {"offset", r.offset},      {"mu", r.mu},               {"t_final", cfg.t_final},
        {"samples", double(r.samples)},
        {"x_final", r.final_state[0]}, {"y_final", r.final_state[1]},
        {"z_final", r.final_state[2]}, {"w_final", r.final_state[3]},
        {"leading_real_part", r.leading_real_part},
        {"amplitude", e.amplitude}, {"period", e.period},
        {"linear_period", 2.0 * 3.14159265358979323846 / scan.omega0},
        {"drift", e.drift},         {"peaks", double(e.peaks)},
        {"converged", double(e.converged)}, {"equilibrium", double(e.equilibrium)},
        {"cycle", double(r.cycle)}};

    Sink sink(cfg, out);
    auto& o = sink.stream();
    if (cfg.format.value_or("csv") == "csv") {
        for (std::size_t i = 0; i < fields.size(); ++i) o << (i ? "," : "") << fields[i].first;
        o << '\n';
        for (std::size_t i = 0; i < fields.size(); ++i)
            o << (i ? "," : "") << format_number(fields[i].second, kCsvDigits);
        o << '\n';
    } else {
        ordered_json j;
        for (const auto& [name, v] : fields) {
            const std::string n = name;
            if (n == "converged" || n == "equilibrium" || n == "cycle") j[n] = v != 0.0;
            else if (n == "samples" || n == "peaks") j[n] = static_cast<long long>(v);
            else j[n] = v;
        }
        o << j.dump(2) << '\n';
    }
    return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    validate(cfg);
    acceptance::Options opt;
    opt.quick = cfg.quick;
    opt.a0_perturbation = cfg.a0_perturbation;
    const auto results = acceptance::run_all(opt);
    Sink sink(cfg, out);
    auto& o = sink.stream();
    bool ok = true;
    if (cfg.format.value_or("") == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& r : results) {
            ok = ok && r.passed;
            arr.push_back({{"id", r.id},
                           {"name", r.name},
                           {"status", r.skipped ? "SKIP" : (r.passed ? "PASS" : "FAIL")},
                           {"runtime_ms", r.runtime_ms},
                           {"detail", r.detail}});
        }
        o << arr.dump(2) << '\n';
    } else {
        ok = acceptance::print_report(results, o);
    }
    return ok ? kOk : kComputationFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"First Lyapunov coefficient of the fast-slow Hopf point", "hopf-lyap"};
    app.require_subcommand(1, 1);

    double k = 0.0, mu_guess = 0.0, offset = 0.0, t_final = 0.0, perturb = 0.0;
    std::vector<double> eps;
    std::string out_path, format, config;
    bool quick = false;
    app.add_option("--k", k, "saturation parameter k");
    app.add_option("--eps", eps, "comma separated eps values")->delimiter(',');
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "csv or json");
    app.add_option("--config", config, "JSON config file; flags override it");
    app.add_option("--mu-guess", mu_guess, "Newton start for mu_H");
    app.add_option("--offset", offset, "simulate: mu - mu_H");
    app.add_option("--t-final", t_final, "simulate: integration horizon");
    app.add_flag("--quick", quick, "verify: skip the simulation criterion");
    app.add_option("--perturb-a0", perturb)->group("");  // test hook
    app.fallthrough();

    std::string which;
    const std::pair<const char*, const char*> subs[] = {
        {"asymptotics", "closed-form expansion coefficients and a0"},
        {"sweep", "numerical coefficient along the Hopf curve for each --eps"},
        {"simulate", "integrate at mu_H + --offset and measure the cycle"},
        {"verify", "run the acceptance checks"}};
    for (const auto& [name, help] : subs)
        app.add_subcommand(name, help)->callback([&which, n = name] { which = n; });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& ex) {
        err << "usage error: " << ex.what() << '\n' << app.help();
        return kUsage;
    }

    RunConfig cfg;
    try {
        if (app.count("--config")) {
            std::ifstream in(config, std::ios::binary);
            if (!in) throw UsageError("cannot read config " + config);
            std::stringstream ss;
            ss << in.rdbuf();
            load_config_json(ss.str(), cfg);
        }
        if (app.count("--k")) cfg.k = k;
        if (app.count("--eps")) cfg.eps_list = eps;
        if (app.count("--out")) cfg.output_path = out_path;
        if (app.count("--format")) cfg.format = format;
        if (app.count("--mu-guess")) cfg.mu_guess = mu_guess;
        if (app.count("--offset")) cfg.mu_offset = offset;
        if (app.count("--t-final")) cfg.t_final = t_final;
        if (quick) cfg.quick = true;
        if (app.count("--perturb-a0")) cfg.a0_perturbation = perturb;

        if (which == "asymptotics") return cmd_asymptotics(cfg, out, err);
        if (which == "sweep") return cmd_sweep(cfg, out, err);
        if (which == "simulate") return cmd_simulate(cfg, out, err);
        return cmd_verify(cfg, out, err);
    } catch (const UsageError& ex) {
        err << "usage error: " << ex.what() << '\n';
        return kUsage;
    }
}

}  // namespace hopflyap::cli
