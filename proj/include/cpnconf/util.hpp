#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace cpnconf {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Verbosity comes from CPNCONF_LOG_LEVEL (error|warn|info|debug); default warn.
LogLevel log_level();
void log_msg(LogLevel level, std::string_view msg);

inline void log_error(std::string_view m) { log_msg(LogLevel::Error, m); }
inline void log_warn(std::string_view m) { log_msg(LogLevel::Warn, m); }
inline void log_info(std::string_view m) { log_msg(LogLevel::Info, m); }
inline void log_debug(std::string_view m) { log_msg(LogLevel::Debug, m); }

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace cpnconf
