#include "celle/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace celle {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("CELLE_LOG");
        if (!env) return LogLevel::kWarn;
        if (!std::strcmp(env, "error")) return LogLevel::kError;
        if (!std::strcmp(env, "warn")) return LogLevel::kWarn;
        if (!std::strcmp(env, "info")) return LogLevel::kInfo;
        if (!std::strcmp(env, "debug")) return LogLevel::kDebug;
        return LogLevel::kWarn;
    }();
    return level;
}

void log(LogLevel level, const std::string& msg) {
    if (level > log_level()) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "[celle:%s] %s\n", names[static_cast<int>(level)], msg.c_str());
}

}  // namespace celle
