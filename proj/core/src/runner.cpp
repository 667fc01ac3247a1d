#include "divtriage/runner.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstring>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace divtriage {

using nlohmann::json;

std::vector<EngineConfig> load_engine_configs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open engine config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw CorpusError(std::string("engine config parse error: ") + e.what());
    }
    std::vector<EngineConfig> engines;
    for (const auto& ej : j) {
        EngineConfig e;
        e.name = ej.at("name").get<std::string>();
        e.command = ej.at("command").get<std::string>();
        e.args_template = ej.at("args_template").get<std::vector<std::string>>();
        e.timeout_ms = ej.value("timeout_ms", kDefaultTimeoutMs);
        if (ej.contains("env"))
            e.env = ej.at("env").get<std::map<std::string, std::string>>();
        const auto placeholders = std::count(e.args_template.begin(), e.args_template.end(),
                                             std::string(kSnippetPlaceholder));
        if (placeholders != 1)
            throw CorpusError("engine " + e.name + ": args_template must contain " +
                              kSnippetPlaceholder + " exactly once");
        if (e.timeout_ms <= 0)
            throw CorpusError("engine " + e.name + ": timeout must be positive");
        for (const auto& other : engines)
            if (other.name == e.name)
                throw CorpusError("duplicate engine name: " + e.name);
        engines.push_back(std::move(e));
    }
    return engines;
}

namespace {

class TempSnippetFile {
public:
    explicit TempSnippetFile(const std::string& contents) {
        char tmpl[] = "/tmp/divtriage-snippet-XXXXXX";
        int fd = mkstemp(tmpl);
        if (fd < 0) throw SpawnError("mkstemp failed");
        path_ = tmpl;
        ssize_t off = 0;
        while (off < static_cast<ssize_t>(contents.size())) {
            ssize_t w = write(fd, contents.data() + off, contents.size() - off);
            if (w < 0) {
                close(fd);
                throw SpawnError("cannot write snippet temp file");
            }
            off += w;
        }
        close(fd);
    }
    ~TempSnippetFile() { unlink(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Drains fd into out, honoring the capture cap.
void drain(int fd, std::string& out, bool& truncated) {
    char buf[4096];
    for (;;) {
        ssize_t n = read(fd, buf, sizeof buf);
        if (n <= 0) break;
        if (out.size() < kMaxCapturedBytes) {
            std::size_t take = std::min<std::size_t>(n, kMaxCapturedBytes - out.size());
            out.append(buf, take);
            if (take < static_cast<std::size_t>(n)) truncated = true;
        } else {
            truncated = true;
        }
    }
}

}  // namespace

EngineResult run_one(const EngineConfig& engine, const std::string& snippet) {
    TempSnippetFile snippet_file(snippet);

    std::vector<std::string> args;
    args.push_back(engine.command);
    for (const auto& a : engine.args_template)
        args.push_back(a == kSnippetPlaceholder ? snippet_file.path() : a);

    int out_pipe[2], err_pipe[2], exec_pipe[2];
    if (pipe(out_pipe) || pipe(err_pipe) || pipe2(exec_pipe, O_CLOEXEC))
        throw SpawnError("pipe creation failed");

    const auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0) throw SpawnError("fork failed");

    if (pid == 0) {
        // Child: own process group so a timeout can kill the whole tree.
        setpgid(0, 0);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);
        close(exec_pipe[0]);
        for (const auto& [k, v] : engine.env) setenv(k.c_str(), v.c_str(), 1);
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        argv.push_back(nullptr);
        execvp(argv[0], argv.data());
        int err = errno;
        (void)!write(exec_pipe[1], &err, sizeof err);
        _exit(127);
    }

    close(out_pipe[1]);
    close(err_pipe[1]);
    close(exec_pipe[1]);

    // exec failure is reported through the CLOEXEC pipe
    int exec_errno = 0;
    {
        ssize_t n = read(exec_pipe[0], &exec_errno, sizeof exec_errno);
        close(exec_pipe[0]);
        if (n == sizeof exec_errno) {
            close(out_pipe[0]);
            close(err_pipe[0]);
            waitpid(pid, nullptr, 0);
            throw SpawnError("cannot execute " + engine.command + ": " +
                             std::strerror(exec_errno));
        }
    }

    EngineResult result;
    result.engine_name = engine.name;
    bool out_trunc = false, err_trunc = false;

    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    bool out_open = true, err_open = true;
    int status = 0;
    bool exited = false;
    const auto deadline = start + std::chrono::milliseconds(engine.timeout_ms);

    while (true) {
        struct pollfd fds[2];
        nfds_t nfds = 0;
        if (out_open) fds[nfds++] = {out_pipe[0], POLLIN, 0};
        if (err_open) fds[nfds++] = {err_pipe[0], POLLIN, 0};

        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            // Kill the whole process group and record the timeout.
            kill(-pid, SIGKILL);
            waitpid(pid, &status, 0);
            drain(out_pipe[0], result.stdout_text, out_trunc);
            drain(err_pipe[0], result.stderr_text, err_trunc);
            result.timed_out = true;
            result.exit_code = kTimeoutExitCode;
            break;
        }

        if (nfds > 0) {
            int wait_ms = static_cast<int>(
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
            int rc = poll(fds, nfds, std::max(1, std::min(wait_ms, 50)));
            if (rc > 0) {
                for (nfds_t i = 0; i < nfds; ++i) {
                    if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
                    bool is_out = fds[i].fd == out_pipe[0];
                    std::string& sink = is_out ? result.stdout_text : result.stderr_text;
                    bool& trunc = is_out ? out_trunc : err_trunc;
                    char buf[4096];
                    ssize_t n;
                    while ((n = read(fds[i].fd, buf, sizeof buf)) > 0) {
                        if (sink.size() < kMaxCapturedBytes) {
                            std::size_t take =
                                std::min<std::size_t>(n, kMaxCapturedBytes - sink.size());
                            sink.append(buf, take);
                            if (take < static_cast<std::size_t>(n)) trunc = true;
                        } else {
                            trunc = true;
                        }
                    }
                    if (n == 0) (is_out ? out_open : err_open) = false;
                }
            }
        }

        if (!exited) {
            pid_t r = waitpid(pid, &status, WNOHANG);
            if (r == pid) exited = true;
        }
        if (exited && !out_open && !err_open) {
            result.exit_code = WIFEXITED(status)   ? WEXITSTATUS(status)
                               : WIFSIGNALED(status) ? 128 + WTERMSIG(status)
                                                     : -3;
            break;
        }
        if (nfds == 0 && !exited) std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }

    close(out_pipe[0]);
    close(err_pipe[0]);

    if (out_trunc) result.stdout_text += kTruncationMarker;
    if (err_trunc) result.stderr_text += kTruncationMarker;
    result.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    return result;
}

Finding run_differential(const std::vector<EngineConfig>& engines, const std::string& snippet,
                         const std::string& id) {
    if (engines.size() < 2)
        throw CorpusError("run_differential requires at least 2 engines");
    Finding f;
    f.id = id;
    f.snippet = snippet;
    f.created_at = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
    for (const auto& e : engines) {
        try {
            f.engine_results.push_back(run_one(e, snippet));
        } catch (const SpawnError&) {
            EngineResult r;
            r.engine_name = e.name;
            r.exit_code = kSpawnFailureExitCode;
            f.engine_results.push_back(std::move(r));
        }
    }
    return f;
}

std::vector<Finding> run_corpus(const std::vector<EngineConfig>& engines,
                                const std::vector<std::string>& snippets, int parallelism,
                                bool keep_all, const std::vector<std::string>& ids) {
    if (parallelism < 1) throw CorpusError("parallelism must be >= 1");
    if (!ids.empty() && ids.size() != snippets.size())
        throw CorpusError("ids list must match snippet count");

    std::vector<Finding> slots(snippets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= snippets.size()) return;
            std::string id = ids.empty() ? "s" + std::to_string(i) : ids[i];
            slots[i] = run_differential(engines, snippets[i], id);
        }
    };
    std::vector<std::thread> pool;
    int threads = std::min<int>(parallelism, static_cast<int>(snippets.size()));
    for (int t = 0; t < std::max(1, threads); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::vector<Finding> out;
    for (auto& f : slots)
        if (keep_all || is_differential(f)) out.push_back(std::move(f));
    return out;
}

}  // namespace divtriage
