#pragma once

namespace cmbeam {

// Entry point behind the cmbeam executable. Subcommands: simulate, solve,
// experiment, pattern; flags --config, --seed, --out, --quiet. Returns 0 on
// success, 1 on configuration/usage errors, 2 on I/O errors, 3 when a
// single solve diverges or degenerates.
int cli_main(int argc, const char* const* argv);

}  // namespace cmbeam
