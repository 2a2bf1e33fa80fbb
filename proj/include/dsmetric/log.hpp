#pragma once

#include <string>

namespace dsmetric {

// DSMETRIC_LOG = quiet | info | debug (default quiet); messages go to stderr
enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace dsmetric
