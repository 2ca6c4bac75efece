#pragma once

/// @file config.hpp
/// @brief Run-configuration documents.
///
/// {
///   "network": "star3.json",           // relative to the config file
///   "t_final": 1.0, "cfl": 0.9,
///   "n_cells": {"default": 32, "arc1": 64},
///   "output_every": 10,
///   "toggles": {"chemotaxis_source": true, "damping": true,
///               "production": true, "degradation": true},
///   "compat_check": true,
///   "initial": {"default": {"kind": "steady", "params": {"value": 1}},
///               "arc1": {"kind": "gaussian",
///                        "params": {"u": {"amplitude": 1, "width": 0.1}}}},
///   "outputs": {"csv": "out/diag.csv", "snapshots": null}
/// }

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "netchemo/fields.hpp"
#include "netchemo/network.hpp"
#include "netchemo/simulator.hpp"

namespace netchemo {

inline constexpr std::size_t default_cells_per_arc = 32;

struct RunConfig {
    std::filesystem::path network_path;
    NetworkSpec spec;
    SimConfig sim;
    InitialConditions ic;
    std::optional<std::filesystem::path> csv_path;
    std::optional<std::filesystem::path> snapshots_dir;
};

/// Parses a run configuration; relative paths resolve against `base_dir`.
/// Throws ConfigError for bad documents and propagates network errors.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Parses one `{kind, params}` initial-condition object.
InitialCondition parse_initial_condition(std::string_view json_text);

}  // namespace netchemo
