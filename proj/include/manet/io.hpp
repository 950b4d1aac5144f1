#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "manet/model.hpp"

namespace manet {

/// Parses a SimConfig from its JSON form. Relative script paths resolve
/// against `base_dir`. Throws ParameterError on schema problems.
SimConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
SimConfig load_config(const std::filesystem::path& path);

/// Reads a position/activation table: CSV with header slot,node,x,y,active.
ScriptTable read_script_csv(std::istream& in, std::size_t n);

/// Trace as JSON lines: one header line, then one line per slot.
void write_trace(std::ostream& out, const Trace& trace);
std::string trace_to_string(const Trace& trace);
/// Throws MalformedInput on unreadable traces. A missing header line is
/// accepted; `r` then comes from `fallback_r`.
Trace read_trace(std::istream& in, double fallback_r = 1.0);

}  // namespace manet
