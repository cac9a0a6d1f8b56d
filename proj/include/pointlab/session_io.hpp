#pragma once

// Session JSONL: one trial per line, lines of the same session adjacent.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pointlab/task.hpp"

namespace pointlab::session_io {

inline constexpr int kSchemaVersion = 1;

nlohmann::json trial_to_json(const task::SessionRecord& s, const task::TrialRecord& tr);
std::string to_jsonl(const std::vector<task::SessionRecord>& sessions);

// Groups consecutive line objects by session_id. Throws on schema
// violations; messages name the offending field.
std::vector<task::SessionRecord> sessions_from_lines(const std::vector<nlohmann::json>& lines);

// `origin` prefixes error messages, e.g. a file name.
std::vector<task::SessionRecord> parse_jsonl(std::string_view text,
                                             std::string_view origin = "input");

void write_sessions(const std::filesystem::path& path,
                    const std::vector<task::SessionRecord>& sessions);
void append_sessions(const std::filesystem::path& path,
                     const std::vector<task::SessionRecord>& sessions);
std::vector<task::SessionRecord> read_sessions(const std::filesystem::path& path);

}  // namespace pointlab::session_io
