// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#pragma once

#include <iosfwd>

#include "helmscat/io.hpp"

namespace helmscat::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_usage = 2;

/// Entry point of the command-line tool. Subcommands: forward, greens,
/// oracle, verify, invert, sweep, mesh-dump. Every run except a usage error
/// writes <out-dir>/manifest.json; --dry-run prints the plan instead.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err, RunManifest *manifest = nullptr);

} // namespace helmscat::cli
