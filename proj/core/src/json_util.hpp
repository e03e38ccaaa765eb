// SPDX-License-Identifier: Apache-2.0
#pragma once

// Schema helpers for the JSON readers. Private to the core library.

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "kptrack/core_model.hpp"

namespace kptrack::detail {

inline const nlohmann::json& field(const nlohmann::json& obj, const char* name, const std::string& path)
{
    auto it = obj.find(name);
    if (it == obj.end())
        throw SchemaError(path + ": missing field \"" + name + "\"");
    return *it;
}

inline void require_array(const nlohmann::json& j, const std::string& path, std::size_t size = 0)
{
    if (!j.is_array())
        throw SchemaError(path + ": expected array");
    if (size != 0 && j.size() != size)
        throw SchemaError(path + ": expected " + std::to_string(size) + " elements, got " +
                          std::to_string(j.size()));
}

inline double require_number(const nlohmann::json& j, const std::string& path)
{
    if (!j.is_number())
        throw SchemaError(path + ": expected number");
    return j.get<double>();
}

inline std::int64_t require_integer(const nlohmann::json& j, const std::string& path)
{
    if (!j.is_number_integer())
        throw SchemaError(path + ": expected integer");
    return j.get<std::int64_t>();
}

} // namespace kptrack::detail
