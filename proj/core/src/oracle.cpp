#include "divtriage/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "divtriage/prompts.hpp"

namespace divtriage {

using nlohmann::json;

std::string actor_name(Actor a) {
    switch (a) {
        case Actor::Orchestrator: return "orchestrator";
        case Actor::DiscrepancyFinder: return "discrepancy_finder";
        case Actor::SpecChecker: return "spec_checker";
        case Actor::ConfidenceChecker: return "confidence_checker";
        case Actor::DuplicateChecker: return "duplicate_checker";
        case Actor::FpCritic: return "fp_critic";
        case Actor::Minimizer: return "minimizer";
        case Actor::ToolTerminal: return "tool_terminal";
        case Actor::ToolSpec: return "tool_spec";
        case Actor::ToolTopK: return "tool_top_k";
    }
    return "unknown";
}

Actor actor_from_name(const std::string& s) {
    static const std::map<std::string, Actor> table = {
        {"orchestrator", Actor::Orchestrator},
        {"discrepancy_finder", Actor::DiscrepancyFinder},
        {"spec_checker", Actor::SpecChecker},
        {"confidence_checker", Actor::ConfidenceChecker},
        {"duplicate_checker", Actor::DuplicateChecker},
        {"fp_critic", Actor::FpCritic},
        {"minimizer", Actor::Minimizer},
        {"tool_terminal", Actor::ToolTerminal},
        {"tool_spec", Actor::ToolSpec},
        {"tool_top_k", Actor::ToolTopK},
    };
    auto it = table.find(s);
    if (it == table.end()) throw CorpusError("unknown actor: " + s);
    return it->second;
}

namespace {

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::Decision: return "DECISION";
        case Termination::StepLimit: return "STEP_LIMIT";
        case Termination::Error: return "ERROR";
    }
    return "ERROR";
}

Termination termination_from_name(const std::string& s) {
    if (s == "DECISION") return Termination::Decision;
    if (s == "STEP_LIMIT") return Termination::StepLimit;
    return Termination::Error;
}

}  // namespace

json transcript_to_json(const Transcript& t) {
    json steps = json::array();
    for (const auto& s : t.steps)
        steps.push_back(json{{"actor", actor_name(s.actor)}, {"input", s.input},
                             {"output", s.output}});
    return json{{"finding_id", t.finding_id},
                {"steps", std::move(steps)},
                {"input_tokens", t.input_tokens},
                {"output_tokens", t.output_tokens},
                {"wall_time_ms", t.wall_time_ms},
                {"terminated_by", termination_name(t.terminated_by)}};
}

Transcript transcript_from_json(const json& j) {
    Transcript t;
    t.finding_id = j.value("finding_id", std::string{});
    for (const auto& sj : j.at("steps"))
        t.steps.push_back(Step{actor_from_name(sj.at("actor").get<std::string>()),
                               sj.value("input", std::string{}),
                               sj.value("output", std::string{})});
    t.input_tokens = j.value("input_tokens", std::int64_t{0});
    t.output_tokens = j.value("output_tokens", std::int64_t{0});
    t.wall_time_ms = j.value("wall_time_ms", 0.0);
    t.terminated_by = termination_from_name(j.value("terminated_by", std::string{"ERROR"}));
    return t;
}

std::int64_t approx_tokens(std::string_view text) {
    std::int64_t count = 0;
    bool in_chunk = false;
    for (char c : text) {
        bool ws = c == ' ' || c == '\n' || c == '\t' || c == '\r';
        if (!ws && !in_chunk) ++count;
        in_chunk = !ws;
    }
    return count;
}

// ---- Scripted endpoint ---------------------------------------------------

ScriptedEndpoint ScriptedEndpoint::from_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EndpointError("cannot open script fixture: " + path);
    std::vector<Entry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        Entry e;
        e.match = j.value("match", std::string{});
        e.respond = j.at("respond");
        e.repeat = j.value("repeat", false);
        entries.push_back(std::move(e));
    }
    return ScriptedEndpoint(std::move(entries));
}

EndpointReply ScriptedEndpoint::complete(const std::string& system_prompt,
                                         const std::vector<Message>& history,
                                         std::span<const ToolDescriptor>) {
    if (consumed_.size() != entries_.size()) consumed_.assign(entries_.size(), false);
    std::string rendered = system_prompt;
    for (const auto& m : history) {
        rendered += "\n";
        rendered += m.content;
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (consumed_[i]) continue;
        const Entry& e = entries_[i];
        if (!e.match.empty() && rendered.find(e.match) == std::string::npos) continue;
        if (!e.repeat) consumed_[i] = true;
        const json& r = e.respond;
        if (r.is_string()) return FinalAnswer{r.get<std::string>()};
        if (r.contains("tool"))
            return ToolCall{r.at("tool").get<std::string>(), r.value("arguments", json::object())};
        if (r.contains("text")) return FinalAnswer{r.at("text").get<std::string>()};
        return FinalAnswer{r.dump()};
    }
    throw EndpointError("scripted endpoint: no remaining entry matches the conversation");
}

// ---- HTTP endpoint -------------------------------------------------------

EndpointReply HttpEndpoint::complete(const std::string& system_prompt,
                                     const std::vector<Message>& history,
                                     std::span<const ToolDescriptor> tools) {
    json messages = json::array();
    messages.push_back({{"role", "system"}, {"content", system_prompt}});
    for (const auto& m : history) messages.push_back({{"role", m.role}, {"content", m.content}});

    json body{{"model", cfg_.model}, {"messages", std::move(messages)},
              {"temperature", cfg_.temperature}};
    if (!tools.empty()) {
        json tj = json::array();
        for (const auto& t : tools)
            tj.push_back({{"type", "function"},
                          {"function",
                           {{"name", t.name},
                            {"description", t.description},
                            {"parameters", {{"type", "object"}}}}}});
        body["tools"] = std::move(tj);
    }

    httplib::Client client(cfg_.base_url);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (const char* key = std::getenv(cfg_.api_key_env.c_str()))
        headers.emplace("Authorization", std::string("Bearer ") + key);

    auto res = client.Post(cfg_.path, headers, body.dump(), "application/json");
    if (!res) throw EndpointError("endpoint transport failure: " + cfg_.base_url);
    if (res->status != 200)
        throw EndpointError("endpoint returned HTTP " + std::to_string(res->status));

    try {
        json j = json::parse(res->body);
        const json& msg = j.at("choices").at(0).at("message");
        if (msg.contains("tool_calls") && !msg["tool_calls"].empty()) {
            const json& tc = msg["tool_calls"][0]["function"];
            json args = json::object();
            if (tc.contains("arguments")) {
                if (tc["arguments"].is_string())
                    args = json::parse(tc["arguments"].get<std::string>());
                else
                    args = tc["arguments"];
            }
            return ToolCall{tc.at("name").get<std::string>(), std::move(args)};
        }
        return FinalAnswer{msg.value("content", std::string{})};
    } catch (const json::exception& e) {
        throw EndpointError(std::string("malformed endpoint response: ") + e.what());
    }
}

// ---- Agent machinery -----------------------------------------------------

namespace {

struct StepLimitReached {};

void append_step(Transcript& t, int limit, Step step) {
    if (static_cast<int>(t.steps.size()) >= limit) throw StepLimitReached{};
    t.steps.push_back(std::move(step));
}

const std::vector<Actor> kSubAgents = {Actor::DiscrepancyFinder, Actor::SpecChecker,
                                       Actor::ConfidenceChecker, Actor::DuplicateChecker,
                                       Actor::FpCritic, Actor::Minimizer};

std::string_view system_prompt_for(Actor a) {
    switch (a) {
        case Actor::Orchestrator: return prompts::kOrchestrator;
        case Actor::DiscrepancyFinder: return prompts::kDiscrepancyFinder;
        case Actor::SpecChecker: return prompts::kSpecChecker;
        case Actor::ConfidenceChecker: return prompts::kConfidenceChecker;
        case Actor::DuplicateChecker: return prompts::kDuplicateChecker;
        case Actor::FpCritic: return prompts::kFpCritic;
        case Actor::Minimizer: return prompts::kMinimizer;
        default: return {};
    }
}

// Tool permission matrix. Sub-agent delegation is reserved to the
// orchestrator; nesting stops at depth 1.
std::vector<std::string> permitted_tools(Actor a) {
    switch (a) {
        case Actor::Orchestrator: {
            std::vector<std::string> t = {"terminal", "spec", "top_k"};
            for (Actor sub : kSubAgents) t.push_back(actor_name(sub));
            return t;
        }
        case Actor::DiscrepancyFinder: return {"terminal", "spec"};
        case Actor::SpecChecker: return {"spec"};
        case Actor::DuplicateChecker: return {"top_k"};
        case Actor::FpCritic:
        case Actor::ConfidenceChecker:
        case Actor::Minimizer: return {"terminal"};
        default: return {};
    }
}

std::vector<ToolDescriptor> descriptors_for(const std::vector<std::string>& names) {
    static const std::map<std::string, std::string> desc = {
        {"terminal", "Run a code snippet on a configured engine: terminal(engine_name, code)"},
        {"spec", "Search the language specification for relevant sections: spec(query)"},
        {"top_k", "Retrieve previously reported similar issues: top_k(query, k)"},
        {"discrepancy_finder", "Sub-agent: structure the behavioral difference"},
        {"spec_checker", "Sub-agent: evaluate specification compliance"},
        {"confidence_checker", "Sub-agent: score confidence of the reasoning"},
        {"duplicate_checker", "Sub-agent: check for known issues"},
        {"fp_critic", "Sub-agent: identify false positives"},
        {"minimizer", "Sub-agent: create a minimal reproducible example"},
    };
    std::vector<ToolDescriptor> out;
    for (const auto& n : names) out.push_back({n, desc.at(n)});
    return out;
}

std::string describe_finding(const Finding& f) {
    std::ostringstream out;
    out << "Finding " << f.id << "\n--- snippet ---\n" << f.snippet << "\n";
    for (const auto& r : f.engine_results) {
        out << "--- engine " << r.engine_name << " (exit " << r.exit_code;
        if (r.timed_out) out << ", timed out";
        out << ") ---\nstdout:\n" << r.stdout_text << "\nstderr:\n" << r.stderr_text << "\n";
    }
    return out.str();
}

std::string truncate(const std::string& s, std::size_t n = 200) {
    return s.size() <= n ? s : s.substr(0, n) + "...";
}

// Dispatches a plain tool call and records the tool step. Returns the
// observation text handed back to the calling agent.
std::string dispatch_tool(const std::string& tool, const json& args, const OracleDeps& deps,
                          const Finding& finding, Transcript& transcript) {
    std::string result;
    Actor actor;
    if (tool == "terminal") {
        actor = Actor::ToolTerminal;
        std::string code = args.value("code", finding.snippet);
        std::string engine = args.value("engine_name", std::string{});
        std::ostringstream out;
        if (!deps.engines || deps.engines->empty()) {
            out << "no engines configured\n";
        } else {
            for (const auto& e : *deps.engines) {
                if (!engine.empty() && e.name != engine) continue;
                EngineResult r = [&] {
                    try {
                        return run_one(e, code);
                    } catch (const SpawnError& ex) {
                        EngineResult fail;
                        fail.engine_name = e.name;
                        fail.exit_code = kSpawnFailureExitCode;
                        fail.stderr_text = ex.what();
                        return fail;
                    }
                }();
                out << "[" << r.engine_name << "] exit " << r.exit_code << "\nstdout:\n"
                    << r.stdout_text << "\nstderr:\n" << r.stderr_text << "\n";
            }
        }
        result = out.str();
    } else if (tool == "spec") {
        actor = Actor::ToolSpec;
        std::string query = args.value("query", std::string{});
        int limit = args.value("limit", 5);
        std::ostringstream out;
        if (deps.spec) {
            auto hits = deps.spec->query(query, limit);
            if (hits.empty()) out << "no matching sections\n";
            for (const auto& h : hits)
                out << "section " << h.section_id << " " << h.title << "\n" << h.excerpt << "\n";
        } else {
            out << "no specification index configured\n";
        }
        result = out.str();
    } else if (tool == "top_k") {
        actor = Actor::ToolTopK;
        std::string query = args.value("query", std::string{});
        int k = args.value("k", 10);
        std::ostringstream out;
        out.setf(std::ios::fixed);
        out.precision(4);
        if (deps.issues) {
            auto hits = deps.issues->top_k_similar(query, k);
            if (hits.empty()) out << "no stored issues\n";
            for (const auto& [rec, sim] : hits)
                out << rec.issue_id << " similarity " << sim << " : " << rec.summary << "\n";
        } else {
            out << "no issue store configured\n";
        }
        result = out.str();
    } else {
        throw EndpointError("unknown tool: " + tool);
    }
    append_step(transcript, deps.config.step_limit, Step{actor, args.dump(), result});
    return result;
}

std::optional<Verdict> parse_verdict(const std::string& text, const std::string& finding_id) {
    // the answer may wrap the JSON object in prose; find the outermost braces
    auto open = text.find('{');
    auto close = text.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close < open)
        return std::nullopt;
    try {
        json j = json::parse(text.substr(open, close - open + 1));
        std::string d = j.at("decision").get<std::string>();
        if (d != "REPORT" && d != "SKIP") return std::nullopt;
        double conf = j.at("confidence").get<double>();
        if (conf < 0.0 || conf > 1.0 || !std::isfinite(conf)) return std::nullopt;
        std::string rationale = j.at("rationale").get<std::string>();
        if (rationale.empty()) return std::nullopt;
        Verdict v;
        v.decision = d == "REPORT" ? Decision::Report : Decision::Skip;
        v.confidence = conf;
        v.rationale = std::move(rationale);
        v.finding_id = finding_id;
        return v;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

std::string sub_agent_call(Actor role, const std::string& task, const OracleDeps& deps,
                           const Finding& finding, Transcript& transcript) {
    const auto allowed = permitted_tools(role);
    const auto descriptors = descriptors_for(allowed);
    const std::string system(system_prompt_for(role));

    std::vector<Message> history;
    history.push_back({"user", task});

    const std::size_t budget_start = transcript.steps.size();
    auto budget_left = [&] {
        return static_cast<int>(transcript.steps.size() - budget_start) <
               deps.config.sub_agent_step_limit;
    };

    while (budget_left()) {
        EndpointReply reply = deps.endpoint->complete(system, history, descriptors);
        transcript.input_tokens += approx_tokens(system);
        for (const auto& m : history) transcript.input_tokens += approx_tokens(m.content);

        if (auto* tc = std::get_if<ToolCall>(&reply)) {
            std::string serialized = tc->tool + " " + tc->arguments.dump();
            transcript.output_tokens += approx_tokens(serialized);
            append_step(transcript, deps.config.step_limit,
                        Step{role, truncate(history.back().content), serialized});
            history.push_back({"assistant", serialized});
            if (!contains(allowed, tc->tool)) {
                history.push_back({"user", "tool '" + tc->tool + "' is not permitted for " +
                                               actor_name(role)});
                continue;
            }
            std::string obs = dispatch_tool(tc->tool, tc->arguments, deps, finding, transcript);
            history.push_back({"user", "tool " + tc->tool + " result:\n" + obs});
        } else {
            const auto& fa = std::get<FinalAnswer>(reply);
            transcript.output_tokens += approx_tokens(fa.text);
            append_step(transcript, deps.config.step_limit,
                        Step{role, truncate(history.back().content), fa.text});
            return fa.text;
        }
    }
    return "inconclusive: " + actor_name(role) + " reached its step budget";
}

std::pair<std::optional<Verdict>, Transcript> triage(const Finding& finding,
                                                     const OracleDeps& deps) {
    Transcript transcript;
    transcript.finding_id = finding.id;
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&](Termination t) {
        transcript.terminated_by = t;
        transcript.wall_time_ms = std::chrono::duration<double, std::milli>(
                                      std::chrono::steady_clock::now() - start)
                                      .count();
    };

    const auto allowed = permitted_tools(Actor::Orchestrator);
    const auto descriptors = descriptors_for(allowed);
    const std::string system(prompts::kOrchestrator);

    std::vector<Message> history;
    history.push_back({"user", describe_finding(finding)});

    bool retried = false;
    try {
        for (;;) {
            EndpointReply reply = deps.endpoint->complete(system, history, descriptors);
            transcript.input_tokens += approx_tokens(system);
            for (const auto& m : history) transcript.input_tokens += approx_tokens(m.content);

            if (auto* tc = std::get_if<ToolCall>(&reply)) {
                std::string serialized = tc->tool + " " + tc->arguments.dump();
                transcript.output_tokens += approx_tokens(serialized);
                append_step(transcript, deps.config.step_limit,
                            Step{Actor::Orchestrator, truncate(history.back().content),
                                 serialized});
                history.push_back({"assistant", serialized});
                if (!contains(allowed, tc->tool)) {
                    history.push_back(
                        {"user", "tool '" + tc->tool + "' is not permitted"});
                    continue;
                }
                bool is_sub_agent = std::any_of(kSubAgents.begin(), kSubAgents.end(),
                                                [&](Actor a) { return actor_name(a) == tc->tool; });
                std::string obs;
                if (is_sub_agent) {
                    std::string task = tc->arguments.value("task", describe_finding(finding));
                    obs = sub_agent_call(actor_from_name(tc->tool), task, deps, finding,
                                         transcript);
                    history.push_back({"user", tc->tool + " result:\n" + obs});
                } else {
                    obs = dispatch_tool(tc->tool, tc->arguments, deps, finding, transcript);
                    history.push_back({"user", "tool " + tc->tool + " result:\n" + obs});
                }
            } else {
                const auto& fa = std::get<FinalAnswer>(reply);
                transcript.output_tokens += approx_tokens(fa.text);
                append_step(transcript, deps.config.step_limit,
                            Step{Actor::Orchestrator, truncate(history.back().content), fa.text});
                auto verdict = parse_verdict(fa.text, finding.id);
                if (!verdict) {
                    if (retried) {
                        finish(Termination::Error);
                        return {std::nullopt, std::move(transcript)};
                    }
                    retried = true;
                    history.push_back({"assistant", fa.text});
                    history.push_back(
                        {"user",
                         "Your final answer was malformed. Reply with exactly one JSON object: "
                         "{\"decision\": \"REPORT\" or \"SKIP\", \"confidence\": number in "
                         "[0,1], \"rationale\": non-empty string}"});
                    continue;
                }
                if (verdict->decision == Decision::Report && deps.issues)
                    deps.issues->record_issue(verdict->rationale, finding.id);
                finish(Termination::Decision);
                return {std::move(verdict), std::move(transcript)};
            }
        }
    } catch (const StepLimitReached&) {
        finish(Termination::StepLimit);
        Verdict v;
        v.decision = Decision::Skip;
        v.confidence = 0.0;
        v.rationale = "step limit";
        v.finding_id = finding.id;
        return {std::move(v), std::move(transcript)};
    } catch (const EndpointError&) {
        finish(Termination::Error);
        return {std::nullopt, std::move(transcript)};
    }
}

std::pair<std::optional<Verdict>, Transcript> triage_sequential(const Finding& finding,
                                                                const OracleDeps& deps) {
    Transcript transcript;
    transcript.finding_id = finding.id;
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&](Termination t) {
        transcript.terminated_by = t;
        transcript.wall_time_ms = std::chrono::duration<double, std::milli>(
                                      std::chrono::steady_clock::now() - start)
                                      .count();
    };

    const std::string system(prompts::kSequential);
    std::vector<Message> history;

    auto ask = [&](const std::string& user_msg) {
        history.push_back({"user", user_msg});
        EndpointReply reply = deps.endpoint->complete(system, history, {});
        transcript.input_tokens += approx_tokens(system);
        for (const auto& m : history) transcript.input_tokens += approx_tokens(m.content);
        std::string text;
        if (auto* fa = std::get_if<FinalAnswer>(&reply))
            text = fa->text;
        else {
            const auto& tc = std::get<ToolCall>(reply);
            text = tc.tool + " " + tc.arguments.dump();
        }
        transcript.output_tokens += approx_tokens(text);
        append_step(transcript, deps.config.step_limit,
                    Step{Actor::Orchestrator, truncate(user_msg), text});
        history.push_back({"assistant", text});
        return text;
    };

    try {
        // stage 1: summarize
        ask(describe_finding(finding) + "\nStage 1: summarize the behavioral discrepancy.");

        // stage 2: specification lookup, query authored by the model
        std::string query =
            ask("Stage 2: give a search query for the language specification sections relevant "
                "to this discrepancy. Reply with the query text only.");
        {
            json args{{"query", query}};
            std::string obs = dispatch_tool("spec", args, deps, finding, transcript);
            history.push_back({"user", "specification search result:\n" + obs});
        }

        // stage 3: optional terminal verification
        std::string stage3 =
            ask("Stage 3: is terminal execution needed to verify the behavior? Reply "
                "'RUN: <code>' to execute on every engine, or 'no execution needed'.");
        if (stage3.rfind("RUN:", 0) == 0) {
            json args{{"code", stage3.substr(4)}};
            std::string obs = dispatch_tool("terminal", args, deps, finding, transcript);
            history.push_back({"user", "terminal result:\n" + obs});
        }

        // stage 4: synthesize the decision
        std::string answer =
            ask("Stage 4: synthesize the evidence and decide. Reply with exactly one JSON "
                "object: {\"decision\": \"REPORT\" or \"SKIP\", \"confidence\": number in "
                "[0,1], \"rationale\": non-empty string}");
        auto verdict = parse_verdict(answer, finding.id);
        if (!verdict) {
            answer = ask(
                "Your final answer was malformed. Reply with exactly one JSON object: "
                "{\"decision\": \"REPORT\" or \"SKIP\", \"confidence\": number in [0,1], "
                "\"rationale\": non-empty string}");
            verdict = parse_verdict(answer, finding.id);
        }
        if (!verdict) {
            finish(Termination::Error);
            return {std::nullopt, std::move(transcript)};
        }
        finish(Termination::Decision);
        return {std::move(verdict), std::move(transcript)};
    } catch (const StepLimitReached&) {
        finish(Termination::StepLimit);
        Verdict v;
        v.decision = Decision::Skip;
        v.confidence = 0.0;
        v.rationale = "step limit";
        v.finding_id = finding.id;
        return {std::move(v), std::move(transcript)};
    } catch (const EndpointError&) {
        finish(Termination::Error);
        return {std::nullopt, std::move(transcript)};
    }
}

TelemetryReport telemetry_report(std::span<const Transcript> transcripts,
                                 double input_price_per_1k, double output_price_per_1k) {
    if (transcripts.empty())
        throw std::invalid_argument("telemetry_report: no transcripts");

    TelemetryReport report;
    std::vector<std::size_t> step_counts;
    double tokens = 0.0, time_ms = 0.0, cost = 0.0;
    for (const auto& t : transcripts) {
        step_counts.push_back(t.steps.size());
        tokens += static_cast<double>(t.token_count());
        time_ms += t.wall_time_ms;
        cost += static_cast<double>(t.input_tokens) / 1000.0 * input_price_per_1k +
                static_cast<double>(t.output_tokens) / 1000.0 * output_price_per_1k;
        for (std::size_t i = 0; i < t.steps.size(); ++i) {
            ++report.actor_calls[actor_name(t.steps[i].actor)];
            if (i + 1 < t.steps.size())
                ++report.actor_transitions[actor_name(t.steps[i].actor) + "->" +
                                           actor_name(t.steps[i + 1].actor)];
        }
    }
    std::sort(step_counts.begin(), step_counts.end());
    const std::size_t n = step_counts.size();
    // median: mean of the middle pair for even n
    report.median_steps = n % 2 == 1
                              ? static_cast<double>(step_counts[n / 2])
                              : (static_cast<double>(step_counts[n / 2 - 1]) +
                                 static_cast<double>(step_counts[n / 2])) /
                                    2.0;
    // nearest-rank p95: the ceil(0.95 n)-th smallest value
    std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    report.p95_steps = static_cast<double>(step_counts[std::min(n - 1, rank == 0 ? 0 : rank - 1)]);
    report.mean_tokens_per_case = tokens / static_cast<double>(n);
    report.mean_time_ms_per_case = time_ms / static_cast<double>(n);
    report.mean_cost_per_case = cost / static_cast<double>(n);
    return report;
}

}  // namespace divtriage
