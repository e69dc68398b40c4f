#pragma once

#include "chirpsense/quadratic.hpp"
#include "chirpsense/sequences.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace chirpsense {

// Entry point behind the chirpsense binary; args exclude argv[0].
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure.
int run_cli(const std::vector<std::string>& args);

// Named presets (golden, sqrt2, sqrt3, golden-1, sqrt2-1, sqrt3-1) or an
// explicit a/b/c/d quadruple.
QuadraticIrrational parse_alpha(const std::string& text);

// Sequence spec strings: "hoc3:<alpha>", "sine:<alpha>", "prbs:<degree>"
// or "prbs:<degree>:<taps>:<seed>", "constant". Mode applies to chirp kinds.
SequenceSpec parse_seq_spec(const std::string& text, ValueMode mode, std::uint64_t length);

// Config-driven executors (also used by `replay`).
void exec_gen(const nlohmann::json& config);
void exec_acf(const nlohmann::json& config);
void exec_rip(const nlohmann::json& config);
void exec_cond(const nlohmann::json& config);
void exec_numtheory(const nlohmann::json& config);
void exec_identify(const nlohmann::json& config);

} // namespace chirpsense
