#pragma once
#include <string>
#include <vector>

#include <json.hpp>

#include "../errors.hpp"
#include "../moo_engine.hpp"
#include "../pareto.hpp"
#include "atomic_file.hpp"
#include "viewer_bundle.hpp"

namespace paretune {

using Json = nlohmann::ordered_json;

inline constexpr const char* kResultsVersion = "1";

inline Json summary_to_json(const ModelSummary& s, EvalStatus status)
{
    Json j;
    j["family"] = s.family;
    Json hp = Json::object();
    for (const auto& h : s.hyperparameters) hp[h.name] = h.value;
    j["hyperparameters"] = hp;
    if (status == EvalStatus::failed) {
        j["error"] = s.error;
        return j;
    }
    Json stats = Json::object();
    for (const auto& st : s.stats) stats[st.name] = st.value;
    j["stats"] = stats;
    j["converged"] = s.converged;
    j["iterations"] = s.iterations;
    if (!s.coefficients.empty()) {
        Json coef = Json::array();
        for (std::size_t i = 0; i < s.coefficients.size(); ++i)
            coef.push_back({{"name", i < s.coefficient_names.size() ? s.coefficient_names[i] : std::to_string(i + 1)},
                            {"value", s.coefficients[i]}});
        j["coefficients"] = coef;
    }
    if (!s.edges.empty()) {
        if (!s.coefficient_names.empty()) j["variables"] = s.coefficient_names;
        Json groups = Json::array();
        for (const auto& g : s.edges) {
            Json edges = Json::array();
            for (const auto& e : g) edges.push_back(Json::array({e.i, e.j, e.value}));
            groups.push_back(edges);
        }
        j["edges"] = groups;
    }
    return j;
}

inline ModelSummary summary_from_json(const Json& j)
{
    ModelSummary s;
    s.family = j.at("family").get<std::string>();
    for (const auto& [k, v] : j.at("hyperparameters").items()) s.hyperparameters.push_back({k, v.get<double>()});
    if (j.contains("error")) {
        s.error = j.at("error").get<std::string>();
        return s;
    }
    for (const auto& [k, v] : j.at("stats").items()) s.stats.push_back({k, v.get<double>()});
    s.converged = j.at("converged").get<bool>();
    s.iterations = j.at("iterations").get<int>();
    if (j.contains("coefficients"))
        for (const auto& c : j.at("coefficients")) {
            s.coefficient_names.push_back(c.at("name").get<std::string>());
            s.coefficients.push_back(c.at("value").get<double>());
        }
    if (j.contains("variables")) s.coefficient_names = j.at("variables").get<std::vector<std::string>>();
    if (j.contains("edges"))
        for (const auto& g : j.at("edges")) {
            std::vector<Edge> edges;
            for (const auto& e : g) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
            s.edges.push_back(std::move(edges));
        }
    return s;
}

inline Json evaluation_to_json(const EvaluationRecord& r)
{
    Json j;
    j["id"] = r.id;
    j["unit"] = r.point.unit;
    j["natural"] = r.point.natural;
    j["objectives"] = r.objectives.values;
    j["labels"] = r.objectives.labels;
    Json dirs = Json::array();
    for (auto d : r.objectives.directions) dirs.push_back(to_string(d));
    j["directions"] = dirs;
    j["status"] = to_string(r.status);
    j["summary"] = summary_to_json(r.summary, r.status);
    return j;
}

inline EvaluationRecord evaluation_from_json(const Json& j)
{
    EvaluationRecord r;
    r.id = j.at("id").get<int>();
    r.point.unit = j.at("unit").get<std::vector<double>>();
    r.point.natural = j.at("natural").get<std::vector<double>>();
    r.objectives.values = j.at("objectives").get<std::vector<double>>();
    r.objectives.labels = j.at("labels").get<std::vector<std::string>>();
    for (const auto& d : j.at("directions"))
        r.objectives.directions.push_back(d.get<std::string>() == "max" ? Sense::maximize : Sense::minimize);
    r.status = j.at("status").get<std::string>() == "ok" ? EvalStatus::ok : EvalStatus::failed;
    r.summary = summary_from_json(j.at("summary"));
    return r;
}

/// Full results document. `config` is the caller's echo of the run configuration.
inline Json results_to_json(const MooResult& result, const std::string& family, const Json& config)
{
    if (result.archive.records.empty()) throw std::invalid_argument("refusing to serialize a result with an empty archive");
    Json j;
    j["version"] = kResultsVersion;
    j["family"] = family;
    j["config"] = config;
    Json evals = Json::array();
    for (const auto& r : result.evaluations) evals.push_back(evaluation_to_json(r));
    j["evaluations"] = evals;
    j["pareto_ids"] = result.archive.ids();
    j["reference_point"] = result.archive.reference_point;
    j["hypervolume_trace"] = result.hypervolume_trace;
    j["seed"] = result.config.seed;
    j["wall_time"] = result.wall_time;
    return j;
}

/// Compact JSON text with every '<' written as the escape \u003c, so the same bytes are
/// safe inside an HTML script element.
inline std::string dump_results(const Json& j)
{
    const std::string raw = j.dump();
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (c == '<')
            out += "\\u003c";
        else
            out += c;
    }
    return out;
}

inline void write_results_json(const Json& j, const std::string& path)
{
    write_file_atomic(path, dump_results(j) + "\n");
}

inline Json read_results_json(const std::string& path)
{
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
}

inline std::string html_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline constexpr const char* kDataBlockOpen = "<script type=\"application/json\" id=\"pared-data\">";

/// Single self-contained page: the results JSON in the `pared-data` block and the
/// viewer script inlined. `viewer_js` replaces the built-in viewer when non-empty.
inline std::string render_html_report(const Json& j, const std::string& viewer_js = {})
{
    const std::string js = viewer_js.empty() ? std::string(kViewerBundle) : viewer_js;
    if (js.find("</script") != std::string::npos) throw ConfigError("viewer bundle contains a closing script tag");
    std::string html;
    html += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
    html += "<title>Pareto front: " + html_escape(j.value("family", std::string("results"))) + "</title>\n";
    html += "<style>";
    html += kViewerStyle;
    html += "</style>\n</head>\n<body>\n<div id=\"app\"></div>\n";
    html += kDataBlockOpen;
    html += dump_results(j);
    html += "\n</script>\n<script>\n";
    html += js;
    html += "\n</script>\n</body>\n</html>\n";
    return html;
}

inline void write_html_report(const Json& j, const std::string& path, const std::string& viewer_js = {})
{
    write_file_atomic(path, render_html_report(j, viewer_js));
}

/// Text of the `pared-data` block, byte-identical to the sidecar JSON file; empty when absent.
inline std::string extract_embedded_json(const std::string& html)
{
    const auto start = html.find(kDataBlockOpen);
    if (start == std::string::npos) return {};
    const auto body = start + std::char_traits<char>::length(kDataBlockOpen);
    const auto end = html.find("</script>", body);
    if (end == std::string::npos) return {};
    return html.substr(body, end - body);
}

} // namespace paretune
