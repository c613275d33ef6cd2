#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopflyap::cli {

enum ExitCode : int {
    kOk = 0,
    kComputationFailure = 1,
    kConsistencyFailure = 2,
    kUsage = 64,
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double k = 0.0;
    std::vector<double> eps_list;
    double mu_guess = 0.0;  // <= 0: the eps = 0 root
    std::string output_path;
    std::optional<std::string> format;  // "csv" or "json"; unset = per-command default
    bool quick = false;
    double mu_offset = -0.01;
    double t_final = 3000.0;
    double a0_perturbation = 0.0;  // verify negative control
};

// Throws UsageError.
void validate(const RunConfig& cfg);

// Reads the keys of RunConfig from a JSON object into cfg. Throws UsageError.
void load_config_json(const std::string& text, RunConfig& cfg);

// Locale-independent shortest-ish rendering with `digits` significant digits.
std::string format_number(double v, int digits);

int cmd_asymptotics(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full argument handling; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hopflyap::cli
