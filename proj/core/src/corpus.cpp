#include "divtriage/corpus.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace divtriage {

using nlohmann::json;

namespace {

json to_json(const EngineResult& r) {
    return json{{"engine_name", r.engine_name},
                {"stdout", r.stdout_text},
                {"stderr", r.stderr_text},
                {"exit_code", r.exit_code},
                {"wall_time_ms", r.wall_time_ms},
                {"timed_out", r.timed_out}};
}

EngineResult engine_result_from_json(const json& j) {
    EngineResult r;
    r.engine_name = j.at("engine_name").get<std::string>();
    r.stdout_text = j.at("stdout").get<std::string>();
    r.stderr_text = j.at("stderr").get<std::string>();
    r.exit_code = j.at("exit_code").get<int>();
    r.wall_time_ms = j.at("wall_time_ms").get<std::int64_t>();
    r.timed_out = j.at("timed_out").get<bool>();
    return r;
}

}  // namespace

std::vector<Finding> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open findings file: " + path);
    std::vector<Finding> findings;
    std::unordered_set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
            Finding f;
            f.id = j.at("id").get<std::string>();
            f.snippet = j.at("snippet").get<std::string>();
            f.created_at = j.at("created_at").get<std::int64_t>();
            for (const auto& rj : j.at("engine_results"))
                f.engine_results.push_back(engine_result_from_json(rj));
            if (!seen.insert(f.id).second)
                throw CorpusError("duplicate finding id \"" + f.id + "\" at line " +
                                  std::to_string(lineno));
            findings.push_back(std::move(f));
        } catch (const json::exception& e) {
            throw CorpusError("parse error at line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return findings;
}

void save_corpus(const std::vector<Finding>& findings, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw CorpusError("cannot open for writing: " + path);
    for (const auto& f : findings) {
        json j{{"id", f.id},
               {"snippet", f.snippet},
               {"engine_results", json::array()},
               {"created_at", f.created_at}};
        for (const auto& r : f.engine_results) j["engine_results"].push_back(to_json(r));
        out << j.dump() << "\n";
    }
    if (!out) throw CorpusError("write failed: " + path);
}

std::string verdict_to_string(LabelVerdict v) {
    return v == LabelVerdict::Bug ? "BUG" : "NO_BUG";
}

LabelVerdict verdict_from_string(const std::string& s) {
    if (s == "BUG") return LabelVerdict::Bug;
    if (s == "NO_BUG") return LabelVerdict::NoBug;
    throw CorpusError("unknown verdict: " + s);
}

std::vector<Label> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open labels file: " + path);
    std::vector<Label> labels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            Label l;
            l.finding_id = j.at("finding_id").get<std::string>();
            l.verdict = verdict_from_string(j.at("verdict").get<std::string>());
            l.root_cause = j.value("root_cause", std::string{});
            labels.push_back(std::move(l));
        } catch (const json::exception& e) {
            throw CorpusError("parse error at line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return labels;
}

void save_labels(const std::vector<Label>& labels, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CorpusError("cannot open for writing: " + path);
    for (const auto& l : labels) {
        json j{{"finding_id", l.finding_id},
               {"verdict", verdict_to_string(l.verdict)},
               {"root_cause", l.root_cause}};
        out << j.dump() << "\n";
    }
}

bool is_differential(const Finding& f) {
    if (f.engine_results.size() < 2)
        throw CorpusError("is_differential requires at least 2 engine results");
    const auto& first = f.engine_results.front();
    for (std::size_t i = 1; i < f.engine_results.size(); ++i) {
        const auto& r = f.engine_results[i];
        if (r.stdout_text != first.stdout_text || r.stderr_text != first.stderr_text)
            return true;
    }
    return false;
}

}  // namespace divtriage
