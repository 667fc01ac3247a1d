#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "divtriage/corpus.hpp"

namespace divtriage {

constexpr std::int64_t kDefaultTimeoutMs = 10'000;
// Per-stream capture cap; longer output is cut and marked.
constexpr std::size_t kMaxCapturedBytes = 1 << 20;
inline constexpr const char* kTruncationMarker = "\n[output truncated]\n";
// Token in args_template replaced by the snippet file path.
inline constexpr const char* kSnippetPlaceholder = "{snippet}";

struct EngineConfig {
    std::string name;
    std::string command;
    std::vector<std::string> args_template;  // must contain {snippet} exactly once
    std::int64_t timeout_ms = kDefaultTimeoutMs;
    std::map<std::string, std::string> env;  // overrides for the child
};

struct SpawnError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Engine roster file: JSON array of {name, command, args_template,
// timeout_ms, env}.
std::vector<EngineConfig> load_engine_configs(const std::string& path);

// Writes the snippet to a temp file and runs one engine on it. Output is
// captured up to the per-stream cap; a timed-out process tree is killed
// and reported with the timeout sentinel exit code. Throws SpawnError when
// the binary cannot be executed; a nonzero exit is data, not an error.
EngineResult run_one(const EngineConfig& engine, const std::string& snippet);

// Runs the snippet on every engine, results in configuration order. A
// spawn failure becomes a synthetic result with exit code -2 and empty
// outputs rather than an exception. Requires >= 2 engines.
Finding run_differential(const std::vector<EngineConfig>& engines, const std::string& snippet,
                         const std::string& id);

// Runs many snippets with up to `parallelism` concurrent engine runs.
// Output order equals input order; by default only differential findings
// are kept. ids are "s<index>" unless names are supplied.
std::vector<Finding> run_corpus(const std::vector<EngineConfig>& engines,
                                const std::vector<std::string>& snippets, int parallelism,
                                bool keep_all = false,
                                const std::vector<std::string>& ids = {});

}  // namespace divtriage
