/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   log.hpp
/// @brief  Minimal leveled logger; stderr, one line per event.

#ifndef FEDGATE_LOG_HPP
#define FEDGATE_LOG_HPP

#include <atomic>
#include <sstream>
#include <string>

namespace fedgate::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

std::atomic<Level>& threshold();
void set_level(Level lv);
bool set_level(const std::string& name);  // "error"|"warn"|"info"|"debug"
void write(Level lv, const std::string& line);

}  // namespace fedgate::log

#define FG_LOG(lv, expr)                                                     \
  do {                                                                       \
    if (static_cast<int>(::fedgate::log::Level::lv) <=                      \
        static_cast<int>(::fedgate::log::threshold().load(                  \
            std::memory_order_relaxed))) {                                   \
      std::ostringstream fg_log_os_;                                         \
      fg_log_os_ << expr;                                                    \
      ::fedgate::log::write(::fedgate::log::Level::lv, fg_log_os_.str());   \
    }                                                                        \
  } while (0)

#endif
