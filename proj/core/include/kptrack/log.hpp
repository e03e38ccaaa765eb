// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string_view>

namespace kptrack {

using WarningSink = std::function<void(std::string_view)>;

/// Replaces the process-wide warning sink and returns the previous one.
/// The default sink writes to stderr. Passing an empty function silences
/// warnings.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

} // namespace kptrack
