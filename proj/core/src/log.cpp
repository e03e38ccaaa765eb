// SPDX-License-Identifier: Apache-2.0
#include "kptrack/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace kptrack {
namespace {

std::mutex& sink_mutex()
{
    static std::mutex m;
    return m;
}

WarningSink& sink_slot()
{
    static WarningSink sink = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return sink;
}

} // namespace

WarningSink set_warning_sink(WarningSink sink)
{
    std::lock_guard lock(sink_mutex());
    return std::exchange(sink_slot(), std::move(sink));
}

void warn(std::string_view message)
{
    std::lock_guard lock(sink_mutex());
    if (auto& sink = sink_slot())
        sink(message);
}

} // namespace kptrack
