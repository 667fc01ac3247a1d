#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace divtriage {

// Exit code recorded when an engine run exceeds its timeout.
constexpr int kTimeoutExitCode = -1;
// Exit code recorded when the engine binary could not be spawned at all.
constexpr int kSpawnFailureExitCode = -2;

struct EngineResult {
    std::string engine_name;
    std::string stdout_text;
    std::string stderr_text;
    int exit_code = 0;
    std::int64_t wall_time_ms = 0;
    bool timed_out = false;

    bool operator==(const EngineResult&) const = default;
};

// One differential observation: a snippet plus the outcome on every
// configured engine, in configuration order.
struct Finding {
    std::string id;
    std::string snippet;
    std::vector<EngineResult> engine_results;
    std::int64_t created_at = 0;  // seconds since epoch

    bool operator==(const Finding&) const = default;
};

enum class LabelVerdict { Bug, NoBug };

struct Label {
    std::string finding_id;
    LabelVerdict verdict = LabelVerdict::NoBug;
    std::string root_cause;  // single token, non-empty when verdict is Bug

    bool operator==(const Label&) const = default;
};

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON Lines persistence. Field names are part of the on-disk contract:
// id, snippet, engine_results, created_at / engine_name, stdout, stderr,
// exit_code, wall_time_ms, timed_out.
std::vector<Finding> load_corpus(const std::string& path);
void save_corpus(const std::vector<Finding>& findings, const std::string& path);

std::vector<Label> load_labels(const std::string& path);
void save_labels(const std::vector<Label>& labels, const std::string& path);

std::string verdict_to_string(LabelVerdict v);
LabelVerdict verdict_from_string(const std::string& s);

// True iff at least one engine's (stdout, stderr) pair differs from
// another's. Exit codes do not participate here; they feed clustering.
// Throws CorpusError if fewer than two engine results are present.
bool is_differential(const Finding& f);

}  // namespace divtriage
