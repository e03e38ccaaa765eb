// SPDX-License-Identifier: Apache-2.0
#include "kptrack/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace kptrack {

using json = nlohmann::ordered_json;

namespace {

json rate(double v)
{
    return std::isnan(v) ? json(nullptr) : json(v);
}

json counts_json(const JointCounts& c)
{
    return json{{"TP", c.tp}, {"FP", c.fp}, {"FN", c.fn}, {"IDSW", c.idsw}, {"GT", c.gt}};
}

std::string fmt1(double v)
{
    if (std::isnan(v))
        return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

const BodyPart* find_part(const std::vector<BodyPart>& parts, const std::string& name)
{
    for (const auto& p : parts)
        if (p.name == name)
            return &p;
    return nullptr;
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string report_to_json(const EvalReport& r)
{
    json root;
    root["alpha"] = r.alpha;
    root["joint_names"] = r.joint_names;
    const auto parts = body_parts(r.joint_names);

    if (r.has_map) {
        json per_joint = json::object(), per_part = json::object();
        for (std::size_t j = 0; j < r.ap.size(); ++j)
            per_joint[r.joint_names[j]] = rate(r.ap[j]);
        for (const auto& p : parts)
            per_part[p.name] = rate(part_ap(r, p));
        root["mAP"] = json{{"per_joint", per_joint}, {"per_part", per_part}, {"total", rate(r.map_total)}};
    }
    if (r.has_mot) {
        json per_joint = json::object(), per_part = json::object(), counts = json::object();
        for (std::size_t j = 0; j < r.mota.size(); ++j) {
            per_joint[r.joint_names[j]] = rate(r.mota[j]);
            counts[r.joint_names[j]] = counts_json(r.counts[j]);
        }
        for (const auto& p : parts)
            per_part[p.name] = rate(part_mota(r, p));
        root["MOTA"] = json{{"per_joint", per_joint}, {"per_part", per_part}, {"total", rate(r.mota_total)}};
        root["MOTP"] = r.motp;
        root["precision"] = r.precision;
        root["recall"] = r.recall;
        root["counts"] = json{{"per_joint", counts}, {"total", counts_json(r.total_counts())}};
    }
    return root.dump(2) + "\n";
}

const std::vector<std::string>& table_part_names()
{
    static const std::vector<std::string> names = {"Head", "Shou", "Elb", "Wri", "Hip", "Knee", "Ankl"};
    return names;
}

std::string report_csv_header(const std::vector<std::string>& config_columns)
{
    std::ostringstream out;
    bool first = true;
    auto col = [&](const std::string& name) {
        if (!first)
            out << ',';
        out << csv_escape(name);
        first = false;
    };
    for (const auto& c : config_columns)
        col(c);
    for (const auto& p : table_part_names())
        col("mAP " + p);
    col("mAP Total");
    for (const auto& p : table_part_names())
        col("MOTA " + p);
    col("MOTA Total");
    col("MOTP Total");
    col("Prec Total");
    col("Rec Total");
    out << '\n';
    return out.str();
}

std::string report_csv_row(const EvalReport& r, const std::vector<std::string>& config_values)
{
    const auto parts = body_parts(r.joint_names);
    std::ostringstream out;
    bool first = true;
    auto col = [&](const std::string& v) {
        if (!first)
            out << ',';
        out << csv_escape(v);
        first = false;
    };
    for (const auto& v : config_values)
        col(v);
    for (const auto& name : table_part_names()) {
        const BodyPart* p = find_part(parts, name);
        col(p && r.has_map ? fmt1(part_ap(r, *p)) : "");
    }
    col(r.has_map ? fmt1(r.map_total) : "");
    for (const auto& name : table_part_names()) {
        const BodyPart* p = find_part(parts, name);
        col(p && r.has_mot ? fmt1(part_mota(r, *p)) : "");
    }
    col(r.has_mot ? fmt1(r.mota_total) : "");
    col(r.has_mot ? fmt1(r.motp) : "");
    col(r.has_mot ? fmt1(r.precision) : "");
    col(r.has_mot ? fmt1(r.recall) : "");
    out << '\n';
    return out.str();
}

std::string report_summary(const EvalReport& r)
{
    std::ostringstream out;
    out << "mAP " << fmt1(r.map_total) << " | MOTA " << fmt1(r.mota_total) << " | MOTP " << fmt1(r.motp)
        << " | Prec " << fmt1(r.precision) << " | Rec " << fmt1(r.recall);
    return out.str();
}

} // namespace kptrack
