#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace smrom {

enum class CheckScope { fem, pod, rom, gronwall, all };

CheckScope parse_check_scope(const std::string& s);

/// Runs the selected invariant suites, printing one line per invariant with
/// its worst margin. Returns true iff every invariant holds.
bool run_selfcheck(CheckScope scope, std::uint64_t seed, std::ostream& os);

}  // namespace smrom
