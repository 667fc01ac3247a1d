#pragma once

#include <sys/stat.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "divtriage/corpus.hpp"
#include "divtriage/runner.hpp"

namespace testutil {

// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        char tmpl[] = "/tmp/divtriage-test-XXXXXX";
        path_ = mkdtemp(tmpl);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return path_ + "/" + name; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
}

// Writes an executable /bin/sh script and returns an EngineConfig for it.
inline divtriage::EngineConfig stub_engine(const TempDir& dir, const std::string& name,
                                           const std::string& script_body,
                                           std::int64_t timeout_ms = 5000) {
    std::string path = dir.file(name + ".sh");
    write_file(path, "#!/bin/sh\n" + script_body + "\n");
    chmod(path.c_str(), 0755);
    divtriage::EngineConfig e;
    e.name = name;
    e.command = path;
    e.args_template = {divtriage::kSnippetPlaceholder};
    e.timeout_ms = timeout_ms;
    return e;
}

inline divtriage::EngineResult make_result(const std::string& engine, const std::string& out,
                                           const std::string& err, int exit_code) {
    divtriage::EngineResult r;
    r.engine_name = engine;
    r.stdout_text = out;
    r.stderr_text = err;
    r.exit_code = exit_code;
    return r;
}

inline divtriage::Finding make_finding(const std::string& id,
                                       std::vector<divtriage::EngineResult> results,
                                       const std::string& snippet = "print(1);") {
    divtriage::Finding f;
    f.id = id;
    f.snippet = snippet;
    f.engine_results = std::move(results);
    f.created_at = 1700000000;
    return f;
}

inline divtriage::Finding random_finding(std::mt19937_64& rng, const std::string& id) {
    auto text = [&](int len) {
        std::string s;
        std::uniform_int_distribution<int> ch(32, 126);
        for (int i = 0; i < len; ++i) s.push_back(static_cast<char>(ch(rng)));
        return s;
    };
    std::uniform_int_distribution<int> len(0, 40), code(-2, 9), engines(2, 5);
    std::vector<divtriage::EngineResult> results;
    int n = engines(rng);
    for (int i = 0; i < n; ++i) {
        auto r = make_result("engine" + std::to_string(i), text(len(rng)), text(len(rng)),
                             code(rng));
        r.wall_time_ms = len(rng);
        r.timed_out = false;
        results.push_back(std::move(r));
    }
    return make_finding(id, std::move(results), text(len(rng)));
}

}  // namespace testutil
