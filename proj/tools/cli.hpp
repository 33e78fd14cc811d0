// cli.hpp
//
// Config parsing and the CSV-producing subcommands behind fmmi_cli.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "fmmi/exponents.hpp"

namespace fmmi::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kGuardError = 4 };

struct RunConfig {
    nlohmann::json raw;
    double R = 0.0;
    Pmf pX = Pmf::uniform(2);
    CompoundClass W;
    std::optional<double> alpha, delta, lambda;
    int grid = 0;  // 0: per-command default
    std::uint64_t seed = 1;
    bool t_nats = false;

    std::string hash() const;  // FNV-1a of the canonical config plus flag overrides
};

// Throws std::invalid_argument on any schema or range violation.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Each returns the full CSV text.
std::string cmd_esp(const RunConfig& c);
std::string cmd_optimal_f(const RunConfig& c);
std::string cmd_tradeoff(const RunConfig& c);
std::string cmd_simulate(const RunConfig& c);
// Second return is the per-channel table.
std::pair<std::string, std::string> cmd_relative(const RunConfig& c);
std::string cmd_bsc_report(const RunConfig& c);

std::string fmt(double v);
// Writes via a temp file and rename.
void write_atomic(const std::string& path, const std::string& text);

int run(int argc, char** argv);

}  // namespace fmmi::cli
