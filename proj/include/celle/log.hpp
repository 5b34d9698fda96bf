#pragma once

#include <string>

namespace celle {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Level comes from the CELLE_LOG env var (error|warn|info|debug),
// default warn. Messages go to stderr.
void log(LogLevel level, const std::string& msg);
LogLevel log_level();

}  // namespace celle
