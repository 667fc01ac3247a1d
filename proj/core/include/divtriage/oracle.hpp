#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "divtriage/corpus.hpp"
#include "divtriage/memory.hpp"
#include "divtriage/runner.hpp"
#include "divtriage/specindex.hpp"

namespace divtriage {

enum class Actor {
    Orchestrator,
    DiscrepancyFinder,
    SpecChecker,
    ConfidenceChecker,
    DuplicateChecker,
    FpCritic,
    Minimizer,
    ToolTerminal,
    ToolSpec,
    ToolTopK,
};

std::string actor_name(Actor a);
Actor actor_from_name(const std::string& s);

enum class Decision { Report, Skip };

struct Verdict {
    Decision decision = Decision::Skip;
    double confidence = 0.0;
    std::string rationale;
    std::string finding_id;
};

struct Step {
    Actor actor;
    std::string input;
    std::string output;
};

enum class Termination { Decision, StepLimit, Error };

struct Transcript {
    std::string finding_id;
    std::vector<Step> steps;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    double wall_time_ms = 0.0;
    Termination terminated_by = Termination::Error;

    std::int64_t token_count() const { return input_tokens + output_tokens; }
};

nlohmann::json transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const nlohmann::json& j);

// ---- Model endpoint abstraction ------------------------------------------

struct Message {
    std::string role;  // "user" | "assistant"
    std::string content;
};

struct ToolDescriptor {
    std::string name;
    std::string description;
};

struct ToolCall {
    std::string tool;
    nlohmann::json arguments;
};

struct FinalAnswer {
    std::string text;
};

using EndpointReply = std::variant<ToolCall, FinalAnswer>;

struct EndpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ModelEndpoint {
public:
    virtual ~ModelEndpoint() = default;
    virtual EndpointReply complete(const std::string& system_prompt,
                                   const std::vector<Message>& history,
                                   std::span<const ToolDescriptor> tools) = 0;
};

// Deterministic endpoint driven by an ordered fixture. Each entry holds a
// `match` substring guard against the rendered conversation and a
// `respond` payload (tool call or final answer); entries are consumed in
// order, `repeat` entries are reusable. Used by every test.
class ScriptedEndpoint : public ModelEndpoint {
public:
    struct Entry {
        std::string match;       // empty matches anything
        nlohmann::json respond;  // {"tool","arguments"} or {"text"} or verdict object
        bool repeat = false;
    };

    explicit ScriptedEndpoint(std::vector<Entry> entries) : entries_(std::move(entries)) {}
    static ScriptedEndpoint from_jsonl_file(const std::string& path);

    EndpointReply complete(const std::string& system_prompt, const std::vector<Message>& history,
                           std::span<const ToolDescriptor> tools) override;

private:
    std::vector<Entry> entries_;
    std::vector<bool> consumed_ = {};
};

// Generic HTTP chat-completion client (OpenAI-style wire shape). The API
// key is read from the environment variable named in the config.
class HttpEndpoint : public ModelEndpoint {
public:
    struct Config {
        std::string base_url;  // e.g. "http://localhost:8080"
        std::string path = "/v1/chat/completions";
        std::string model;
        std::string api_key_env = "DIVTRIAGE_API_KEY";
        double temperature = 0.1;
    };

    explicit HttpEndpoint(Config cfg) : cfg_(std::move(cfg)) {}

    EndpointReply complete(const std::string& system_prompt, const std::vector<Message>& history,
                           std::span<const ToolDescriptor> tools) override;

private:
    Config cfg_;
};

// ---- Triage --------------------------------------------------------------

struct OracleConfig {
    int step_limit = 120;
    int sub_agent_step_limit = 20;
    double input_price_per_1k = 0.0;
    double output_price_per_1k = 0.0;
    double confidence_threshold = 0.0;  // verdicts below are discarded by callers
};

struct OracleDeps {
    const std::vector<EngineConfig>* engines = nullptr;  // terminal tool
    const SpecIndex* spec = nullptr;                     // spec tool
    IssueStore* issues = nullptr;                        // top_k tool + duplicate memory
    ModelEndpoint* endpoint = nullptr;
    OracleConfig config;
};

// Orchestrated agentic triage. Returns no Verdict only on endpoint or
// protocol error (Termination::Error); a step-limit overrun yields
// SKIP/0.0. A REPORT verdict records the issue summary in the store.
std::pair<std::optional<Verdict>, Transcript> triage(const Finding& finding,
                                                     const OracleDeps& deps);

// Fixed four-stage pipeline against a single endpoint: summarize, query
// spec, optional terminal verification, synthesize. No duplicate check.
std::pair<std::optional<Verdict>, Transcript> triage_sequential(const Finding& finding,
                                                                const OracleDeps& deps);

// Bounded sub-agent loop with the role's tool subset. Returns the agent's
// final text, or an explicit inconclusive message when its budget runs out.
std::string sub_agent_call(Actor role, const std::string& task, const OracleDeps& deps,
                           const Finding& finding, Transcript& transcript);

// ---- Telemetry -----------------------------------------------------------

struct TelemetryReport {
    double median_steps = 0.0;
    double p95_steps = 0.0;  // nearest-rank percentile
    std::map<std::string, std::int64_t> actor_calls;
    std::map<std::string, std::int64_t> actor_transitions;  // "from->to"
    double mean_tokens_per_case = 0.0;
    double mean_time_ms_per_case = 0.0;
    double mean_cost_per_case = 0.0;
};

TelemetryReport telemetry_report(std::span<const Transcript> transcripts,
                                 double input_price_per_1k, double output_price_per_1k);

// Whitespace-chunk token approximation used for telemetry accounting.
std::int64_t approx_tokens(std::string_view text);

}  // namespace divtriage
