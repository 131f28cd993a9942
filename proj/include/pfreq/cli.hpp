#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfreq {

// Bad flag value or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitConfig = 2 };

struct RunConfig {
    std::string command;
    std::string domain = "disk:r=1";
    std::vector<double> q;
    std::vector<std::string> q_text;  // as typed, used verbatim in records
    std::vector<double> h;
    std::vector<std::string> h_text;
    bool h_given = false;
    double tol = 0.0;          // 0 = solver defaults
    double bound_tol = 0.02;
    std::string format = "json";
    std::string out;           // empty = stdout, or $PFREQ_OUT_DIR/<command>.<ext>
    std::uint64_t seed = 1;
    int samples = 100;
    std::string export_pair;   // directory for f/phi CSV dumps (dual)
};

// Parses argv (argv[0] is the program name) into a validated config. Throws
// ConfigError; help requests are reported through `help` and an empty command.
RunConfig parse_args(int argc, const char* const* argv, std::string* help = nullptr);
void validate(RunConfig& cfg);

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_dual(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_constants(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_conjugate_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full front end: parse, open the output, dispatch. Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pfreq
